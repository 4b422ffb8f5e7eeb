"""Tests for differentiable ops: values against numpy, gradients against finite differences."""

import numpy as np
import pytest

from firecast.nn import ops
from firecast.nn.gradcheck import grad_check
from firecast.nn.tensor import Tensor
from firecast.utils.errors import FirecastValidationError, ShapeError
from tests import oracles

TOL = 1e-6


def _param(rng, *shape, away_from_zero: bool = False) -> Tensor:
    data = rng.normal(size=shape)
    if away_from_zero:
        data = np.sign(data) * (0.1 + np.abs(data))
    return Tensor(data, requires_grad=True)


def _check(build, inputs) -> float:
    """Grad-check sum(w * build(*inputs)) for a fixed random w."""
    w = Tensor(np.random.default_rng(7).normal(size=build(*inputs).shape))

    def f():
        return ops.sum_all(ops.hadamard(build(*inputs), w))

    return grad_check(f, inputs, max_coords=None)


class TestElementwise:
    def setup_method(self):
        self.rng = np.random.default_rng(0)

    @pytest.mark.parametrize("op", [ops.add, ops.sub, ops.hadamard])
    def test_binary_gradients(self, op):
        a, b = _param(self.rng, 3, 4), _param(self.rng, 3, 4)

        assert _check(op, [a, b]) < TOL

    @pytest.mark.parametrize("op", [ops.add, ops.sub, ops.hadamard])
    def test_binary_shapes_must_match(self, op):
        with pytest.raises(ShapeError):
            op(Tensor(np.ones((2, 3))), Tensor(np.ones((3, 2))))

    @pytest.mark.parametrize("op", [ops.sigmoid, ops.tanh, ops.one_minus, lambda x: ops.scale(x, -2.5)])
    def test_unary_gradients(self, op):
        assert _check(op, [_param(self.rng, 2, 5)]) < TOL

    def test_relu_gradient(self):
        assert _check(ops.relu, [_param(self.rng, 4, 4, away_from_zero=True)]) < TOL

    def test_sigmoid_is_stable_for_large_inputs(self):
        out = ops.sigmoid(Tensor([-1000.0, 0.0, 1000.0]))

        assert np.allclose(out.data, [0.0, 0.5, 1.0])
        assert np.all(np.isfinite(out.data))

    def test_relu_values(self):
        assert np.array_equal(ops.relu(Tensor([-1.0, 0.0, 2.0])).data, [0.0, 0.0, 2.0])


class TestSoftmax:
    def test_rows_sum_to_one(self):
        x = Tensor(np.random.default_rng(1).normal(size=(3, 5)) * 50)

        out = ops.softmax(x, axis=-1)

        assert np.allclose(out.data.sum(axis=-1), 1.0)

    @pytest.mark.parametrize("axis", [0, -1])
    def test_gradient(self, axis):
        x = _param(np.random.default_rng(2), 3, 4)

        assert _check(lambda t: ops.softmax(t, axis=axis), [x]) < TOL


class TestShapeOps:
    def setup_method(self):
        self.rng = np.random.default_rng(3)

    def test_concat_split_roundtrip_values(self):
        a, b = Tensor(np.ones((2, 1))), Tensor(np.zeros((2, 3)))

        left, right = ops.split(ops.concat([a, b], axis=1), [1, 3], axis=1)

        assert np.array_equal(left.data, a.data)
        assert np.array_equal(right.data, b.data)

    def test_concat_gradient(self):
        a, b = _param(self.rng, 2, 3), _param(self.rng, 2, 2)

        assert _check(lambda x, y: ops.concat([x, y], axis=-1), [a, b]) < TOL

    def test_split_gradient(self):
        x = _param(self.rng, 3, 5)

        def build(t):
            pieces = ops.split(t, [2, 3], axis=1)
            return ops.concat([ops.scale(pieces[1], 2.0), ops.tanh(pieces[0])], axis=1)

        assert _check(build, [x]) < TOL

    def test_split_sizes_must_cover_axis(self):
        with pytest.raises(ShapeError):
            ops.split(Tensor(np.ones((2, 5))), [2, 2], axis=1)

    def test_concat_incompatible(self):
        with pytest.raises(ShapeError):
            ops.concat([Tensor(np.ones((2, 3))), Tensor(np.ones((3, 3)))], axis=1)

    def test_reshape_and_swapaxes_gradient(self):
        x = _param(self.rng, 2, 3, 4)

        assert _check(lambda t: ops.swapaxes(ops.reshape(t, (6, 4)), 0, 1), [x]) < TOL

    def test_mean_and_sum(self):
        x = _param(self.rng, 3, 3)

        assert np.isclose(ops.mean(x).item(), x.data.mean())
        assert np.isclose(ops.sum_all(x).item(), x.data.sum())
        assert _check(ops.mean, [x]) < TOL


class TestLinear:
    def setup_method(self):
        self.rng = np.random.default_rng(4)

    def test_matmul_values_and_gradient(self):
        a, b = _param(self.rng, 3, 4), _param(self.rng, 4, 2)

        assert np.allclose(ops.matmul(a, b).data, a.data @ b.data)
        assert _check(ops.matmul, [a, b]) < TOL

    def test_matmul_broadcasts_batch(self):
        a, b = _param(self.rng, 2, 3, 4), _param(self.rng, 4, 5)

        assert ops.matmul(a, b).shape == (2, 3, 5)
        assert _check(ops.matmul, [a, b]) < TOL

    def test_matmul_broadcasts_left_operand(self):
        a, b = _param(self.rng, 1, 3), _param(self.rng, 2, 3, 4)

        assert ops.matmul(a, b).shape == (2, 1, 4)
        assert _check(ops.matmul, [a, b]) < TOL

    def test_matmul_inner_dimension(self):
        with pytest.raises(ShapeError):
            ops.matmul(Tensor(np.ones((2, 3))), Tensor(np.ones((2, 3))))

    def test_dense_with_bias(self):
        x, w, b = _param(self.rng, 2, 3, 4), _param(self.rng, 4, 5), _param(self.rng, 5)

        assert np.allclose(ops.dense(x, w, b).data, x.data @ w.data + b.data)
        assert _check(ops.dense, [x, w, b]) < TOL

    @pytest.mark.parametrize("seed", oracles.ORACLE_SEEDS)
    def test_dense_matches_naive_loops(self, seed):
        rng = np.random.default_rng(seed)
        n, d_in, d_out = rng.integers(1, 6, size=3)
        x = rng.normal(size=(n, d_in))
        w = rng.normal(size=(d_in, d_out))
        b = rng.normal(size=d_out) if seed % 2 else None

        out = ops.dense(Tensor(x), Tensor(w), None if b is None else Tensor(b))

        np.testing.assert_allclose(out.data, oracles.dense(x, w, b), rtol=0, atol=oracles.ORACLE_ATOL)

    def test_dense_bias_shape(self):
        with pytest.raises(ShapeError):
            ops.dense(Tensor(np.ones((2, 3))), Tensor(np.ones((3, 4))), Tensor(np.ones(3)))


class TestConv2d:
    def setup_method(self):
        self.rng = np.random.default_rng(5)

    @pytest.mark.parametrize("seed", oracles.ORACLE_SEEDS)
    def test_matches_naive_loops(self, seed):
        rng = np.random.default_rng(seed)
        c_in, c_out = rng.integers(1, 4, size=2)
        height, width = rng.integers(1, 6, size=2)
        kh, kw = rng.choice([1, 3, 5], size=2)
        x = rng.normal(size=(c_in, height, width))
        k = rng.normal(size=(c_out, c_in, kh, kw))
        b = rng.normal(size=c_out)

        out = ops.conv2d_same(Tensor(x), Tensor(k), Tensor(b))

        assert out.shape == (c_out, height, width)
        np.testing.assert_allclose(out.data, oracles.conv2d_same(x, k, b), rtol=0, atol=oracles.ORACLE_ATOL)

    def test_batched_equals_per_sample(self):
        x = self.rng.normal(size=(2, 2, 3, 3))
        k = self.rng.normal(size=(1, 2, 3, 3))

        out = ops.conv2d_same(Tensor(x), Tensor(k))

        for i in range(2):
            assert np.allclose(out.data[i], oracles.conv2d_same(x[i], k))

    def test_gradient_unbatched(self):
        x, k, b = _param(self.rng, 2, 3, 3), _param(self.rng, 2, 2, 3, 3), _param(self.rng, 2)

        assert _check(ops.conv2d_same, [x, k, b]) < TOL

    def test_gradient_batched_without_bias(self):
        x, k = _param(self.rng, 2, 1, 3, 3), _param(self.rng, 2, 1, 3, 3)

        assert _check(ops.conv2d_same, [x, k]) < TOL

    def test_even_kernel_rejected(self):
        with pytest.raises(ShapeError):
            ops.conv2d_same(Tensor(np.ones((1, 3, 3))), Tensor(np.ones((1, 1, 2, 2))))

    def test_channel_mismatch(self):
        with pytest.raises(ShapeError):
            ops.conv2d_same(Tensor(np.ones((2, 3, 3))), Tensor(np.ones((1, 3, 3, 3))))


class TestDropout:
    def test_eval_mode_is_identity(self):
        x = Tensor(np.ones((4, 4)))

        assert ops.dropout(x, 0.5, training=False) is x

    def test_inverted_scaling(self):
        x = Tensor(np.ones((50, 50)))

        out = ops.dropout(x, 0.5, training=True, rng=np.random.default_rng(0))

        assert set(np.unique(out.data)) <= {0.0, 2.0}
        assert 0.4 < (out.data == 0).mean() < 0.6

    def test_same_stream_same_mask(self):
        x = Tensor(np.ones((10, 10)))

        a = ops.dropout(x, 0.3, rng=np.random.default_rng(9))
        b = ops.dropout(x, 0.3, rng=np.random.default_rng(9))

        assert np.array_equal(a.data, b.data)

    def test_training_needs_rng(self):
        with pytest.raises(FirecastValidationError):
            ops.dropout(Tensor(np.ones((3, 3))), 0.2, training=True)

    def test_integer_seed_is_deterministic(self):
        x = Tensor(np.ones((10, 10)))

        assert np.array_equal(ops.dropout(x, 0.3, rng=4).data, ops.dropout(x, 0.3, rng=4).data)

    def test_probability_range(self):
        with pytest.raises(ShapeError):
            ops.dropout(Tensor([1.0]), 1.0)

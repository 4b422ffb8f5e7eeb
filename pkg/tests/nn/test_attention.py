"""Tests for multi-head self-attention."""

import numpy as np
import pytest

from firecast.nn import ops
from firecast.nn.attention import MultiHeadSelfAttention, multi_head_self_attention
from firecast.nn.gradcheck import grad_check
from firecast.nn.params import ParamStore
from firecast.nn.tensor import Tensor
from firecast.utils.errors import ShapeError
from tests import oracles


def _attention(d_in: int = 3, d_model: int = 4, heads: int = 2):
    store = ParamStore()
    layer = MultiHeadSelfAttention(store, "attn", d_in=d_in, d_model=d_model, heads=heads, rng=np.random.default_rng(0))
    return store, layer


class TestMultiHeadSelfAttention:
    def test_registers_parameters(self):
        store, _ = _attention()

        assert sorted(store) == sorted(
            ["attn.W_q", "attn.b_q", "attn.W_k", "attn.b_k", "attn.W_v", "attn.b_v", "attn.W_o", "attn.b_o"]
        )
        assert store["attn.W_o"].shape == (4, 4)

    @pytest.mark.parametrize("seed", oracles.ORACLE_SEEDS)
    def test_matches_naive_loops(self, seed):
        rng = np.random.default_rng(seed)
        heads = int(rng.integers(1, 4))
        d_model = heads * int(rng.integers(1, 4))
        d_in, n = (int(v) for v in rng.integers(1, 6, size=2))
        store = ParamStore()
        layer = MultiHeadSelfAttention(store, "attn", d_in=d_in, d_model=d_model, heads=heads, rng=rng)
        x = rng.normal(size=(n, d_in))

        out = layer(Tensor(x))

        params = {name.split(".")[1]: store[name].data for name in store}
        np.testing.assert_allclose(
            out.data, oracles.self_attention(x, params, heads), rtol=0, atol=oracles.ORACLE_ATOL
        )

    def test_batched_weights_are_row_stochastic(self):
        _, layer = _attention()
        x = Tensor(np.random.default_rng(2).normal(size=(2, 5, 3)))

        out, weights = layer(x, return_weights=True)

        assert out.shape == (2, 5, 4)
        assert weights.shape == (2, 2, 5, 5)
        assert np.allclose(weights.data.sum(axis=-1), 1.0)

    def test_permutation_equivariant(self):
        _, layer = _attention()
        x = np.random.default_rng(3).normal(size=(6, 3))
        perm = np.array([3, 0, 5, 1, 4, 2])

        out = layer(Tensor(x)).data
        permuted = layer(Tensor(x[perm])).data

        assert np.allclose(permuted, out[perm])

    def test_gradients(self):
        store, layer = _attention()
        x = Tensor(np.random.default_rng(4).normal(size=(2, 4, 3)), requires_grad=True)

        def f():
            return ops.mean(ops.tanh(layer(x)))

        assert grad_check(f, store.parameters() + [x], max_coords=6) < 1e-6

    def test_functional_form_reuses_parameters(self):
        store, layer = _attention()
        x = Tensor(np.random.default_rng(5).normal(size=(3, 3)))

        assert np.allclose(multi_head_self_attention(x, store, "attn", heads=2).data, layer(x).data)

    def test_heads_must_divide_model_dim(self):
        with pytest.raises(ShapeError):
            MultiHeadSelfAttention(ParamStore(), "attn", d_in=3, d_model=6, heads=4)

    def test_input_width_checked(self):
        _, layer = _attention()

        with pytest.raises(ShapeError):
            layer(Tensor(np.ones((4, 5))))

"""Tests for the T-GCN model and its graph convolutions."""

import numpy as np
import pytest

from firecast.architectures.tgcn_model import (
    TgcnModel,
    check_distinct_gcns,
    gcn2_forward,
    tgcn_cell_step,
    vertex_features,
)
from firecast.models.model_config import TgcnConfig
from firecast.nn.gradcheck import grad_check
from firecast.nn.losses import bce_loss
from firecast.nn.tensor import Tensor
from firecast.services.grid_graph import build_grid_graph
from firecast.utils.errors import FirecastValidationError, ShapeError
from tests import oracles


def _small(seed: int = 0, radius: int = 1, k: int = 5) -> TgcnModel:
    config = TgcnConfig(
        gcn_hidden=3, hidden=2, radius=radius, k=k, attention_heads=2, attention_dim=4, mlp_widths=[4]
    )
    return TgcnModel(config, n_features=2, seed=seed)


def _random_graph(rng):
    radius = int(rng.integers(0, 3))
    k = int(rng.integers(1, (2 * radius + 1) ** 2 + 1))
    return radius, k, build_grid_graph(radius, k).a_hat_norm


class TestGcn:
    @pytest.mark.parametrize("seed", oracles.ORACLE_SEEDS)
    def test_two_layer_gcn(self, seed):
        rng = np.random.default_rng(seed)
        _, _, a = _random_graph(rng)
        n = a.shape[0]
        batch, d, hidden = (int(v) for v in rng.integers(1, 4, size=3))
        x = rng.normal(size=(batch, n, d))
        w0 = rng.normal(size=(d, hidden))
        w1 = rng.normal(size=(hidden, hidden))

        out = gcn2_forward(a, Tensor(x), Tensor(w0), Tensor(w1))

        assert out.shape == (batch, n, hidden)
        for b in range(batch):
            np.testing.assert_allclose(
                out.data[b], oracles.gcn2(a, x[b], w0, w1), rtol=0, atol=oracles.ORACLE_ATOL
            )

    def test_vertex_count_checked(self):
        with pytest.raises(ShapeError):
            gcn2_forward(np.eye(4), Tensor(np.ones((9, 2))), Tensor(np.ones((2, 3))), Tensor(np.ones((3, 3))))

    def test_distinct_gcns(self):
        check_distinct_gcns(_small().store)

    def test_shared_gcn_weights_rejected(self):
        store = _small().store
        store._params["gcn_r.W0"] = store["gcn_u.W0"]

        with pytest.raises(FirecastValidationError):
            check_distinct_gcns(store)

    def test_repeated_prefix_rejected(self):
        with pytest.raises(FirecastValidationError):
            check_distinct_gcns(_small().store, ("gcn_u", "gcn_u", "gcn_c"))


class TestTgcnCell:
    @pytest.mark.parametrize("seed", oracles.ORACLE_SEEDS)
    def test_matches_naive_loops(self, seed):
        rng = np.random.default_rng(seed)
        radius, k, a = _random_graph(rng)
        gcn_hidden, hidden, n_features = (int(v) for v in rng.integers(1, 4, size=3))
        config = TgcnConfig(
            gcn_hidden=gcn_hidden, hidden=hidden, radius=radius, k=k,
            attention_heads=1, attention_dim=2, mlp_widths=[2],
        )
        model = TgcnModel(config, n_features=n_features, seed=seed)
        p = {name: t.data for name, t in model.store.items()}
        n = a.shape[0]
        x = rng.normal(size=(n, n_features))
        h = rng.uniform(-1.0, 1.0, size=(n, hidden))

        out = tgcn_cell_step(Tensor(a), Tensor(x), Tensor(h), model.store).data

        np.testing.assert_allclose(out, oracles.tgcn_cell(a, x, h, p), rtol=0, atol=oracles.ORACLE_ATOL)


class TestTgcnModel:
    def test_vertex_features_row_major(self):
        features = np.arange(2 * 1 * 2 * 3 * 3, dtype=float).reshape(2, 1, 2, 3, 3)

        x = vertex_features(features)

        assert x.shape == (2, 1, 9, 2)
        # vertex 5 is row 1, col 2
        assert np.array_equal(x[1, 0, 5], features[1, 0, :, 1, 2])

    def test_output_shape_and_range(self):
        model = _small()
        features = np.random.default_rng(3).normal(size=(3, 2, 2, 3, 3))

        scores = model.predict(features, graph=build_grid_graph(1, 5))

        assert scores.shape == (3,)
        assert np.all((scores > 0) & (scores < 1))

    def test_pool_weights_start_uniform(self):
        assert np.array_equal(_small().store["pool.w"].data, np.ones((1, 9)))

    def test_graph_required(self):
        with pytest.raises(ShapeError):
            _small().predict(np.zeros((1, 2, 2, 3, 3)))

    def test_graph_must_match_window(self):
        with pytest.raises(ShapeError):
            _small().predict(np.zeros((1, 2, 2, 3, 3)), graph=build_grid_graph(2, 5))

    def test_radius_zero(self):
        model = _small(radius=0, k=1)

        scores = model.predict(np.zeros((2, 2, 2, 1, 1)), graph=build_grid_graph(0, 1))

        assert scores.shape == (2,)

    def test_gradients(self):
        model = _small()
        graph = build_grid_graph(1, 5)
        features = np.random.default_rng(4).normal(size=(2, 2, 2, 3, 3))
        labels = np.array([1.0, 0.0])

        def f():
            return bce_loss(model.forward(features, graph=graph), labels)

        assert grad_check(f, model.store.parameters(), max_coords=4) < 1e-6

    def test_distinct_stores_per_model(self):
        a, b = _small(seed=1), _small(seed=1)

        assert a.store["gcn_u.W0"] is not b.store["gcn_u.W0"]
        assert np.array_equal(a.store["gcn_u.W0"].data, b.store["gcn_u.W0"].data)

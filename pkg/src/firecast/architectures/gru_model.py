"""Stacked GRU over the centre-cell timeseries."""

from typing import Optional

import numpy as np
from typing_extensions import override

from firecast.models.model_config import GruConfig
from firecast.models.sample import GridGraph
from firecast.nn import ops
from firecast.nn.params import ParamStore
from firecast.nn.tensor import Tensor

from .forecast_model import ForecastModel


def gru_cell_step(x: Tensor, h_prev: Tensor, store: ParamStore, prefix: str) -> Tensor:
    """One GRU update for a batch: x [B, d], h_prev [B, H] -> h [B, H].

        z = σ(x W_xz + h W_hz + b_z)
        r = σ(x W_xr + h W_hr + b_r)
        n = tanh(x W_xn + (r ⊙ h) W_hn + b_n)
        h' = z ⊙ h + (1 - z) ⊙ n

    Input projections are stored fused as W_x [d, 3H], b [3H] (z, r, n
    order); recurrent ones as W_hzr [H, 2H] and W_hn [H, H].
    """
    hidden = h_prev.shape[-1]
    xz, xr, xn = ops.split(ops.dense(x, store[f"{prefix}.W_x"], store[f"{prefix}.b"]), [hidden] * 3, axis=-1)
    hz, hr = ops.split(ops.dense(h_prev, store[f"{prefix}.W_hzr"]), [hidden, hidden], axis=-1)
    z = ops.sigmoid(ops.add(xz, hz))
    r = ops.sigmoid(ops.add(xr, hr))
    n = ops.tanh(ops.add(xn, ops.dense(ops.hadamard(r, h_prev), store[f"{prefix}.W_hn"])))
    return ops.add(ops.hadamard(z, h_prev), ops.hadamard(ops.one_minus(z), n))


def register_gru_cell(store: ParamStore, prefix: str, d_in: int, hidden: int, rng: np.random.Generator) -> None:
    store.add(f"{prefix}.W_x", (d_in, 3 * hidden), rng, fan_in=d_in)
    store.add(f"{prefix}.b", (3 * hidden,), rng, fan_in=hidden)
    store.add(f"{prefix}.W_hzr", (hidden, 2 * hidden), rng, fan_in=hidden)
    store.add(f"{prefix}.W_hn", (hidden, hidden), rng, fan_in=hidden)


class GruModel(ForecastModel):
    """GRU layers over the r = 0 timeseries, linear head, sigmoid."""

    architecture = "gru"

    def __init__(self, config: Optional[GruConfig] = None, n_features: int = 14, seed: int = 0):
        super().__init__(config or GruConfig(), n_features, seed)

    @override
    def build(self, rng: np.random.Generator) -> None:
        c = self.config
        d_in = self.n_features
        for layer in range(c.layers):
            register_gru_cell(self.store, f"gru{layer}", d_in, c.hidden, rng)
            d_in = c.hidden
        self.store.add("head.W", (c.hidden, 1), rng, fan_in=c.hidden)
        self.store.add("head.b", (1,), rng, fan_in=c.hidden)

    @override
    def forward(
        self,
        features: np.ndarray,
        graph: Optional[GridGraph] = None,
        training: bool = False,
        rng: Optional[np.random.Generator] = None,
    ) -> Tensor:
        return gru_forward(self, features, training=training, rng=rng)


def gru_forward(
    model: GruModel,
    features: np.ndarray,
    training: bool = False,
    rng: Optional[np.random.Generator] = None,
) -> Tensor:
    """Run every layer over all ts steps; dropout between layers in training only."""
    c = model.config
    features = model._check_features(features, grid_size=1)
    batch, steps = features.shape[:2]
    sequence = [Tensor(features[:, t, :, 0, 0]) for t in range(steps)]
    for layer in range(c.layers):
        if layer > 0:
            sequence = [ops.dropout(x, c.dropout, training=training, rng=rng) for x in sequence]
        h = Tensor(np.zeros((batch, c.hidden)))
        outputs = []
        for x in sequence:
            h = gru_cell_step(x, h, model.store, f"gru{layer}")
            outputs.append(h)
        sequence = outputs
    logit = ops.dense(sequence[-1], model.store["head.W"], model.store["head.b"])
    return ops.sigmoid(ops.reshape(logit, (batch,)))

"""Conv-LSTM over the (2r+1)x(2r+1) window with an MLP readout."""

from typing import Optional, Tuple

import numpy as np
from typing_extensions import override

from firecast.models.model_config import ConvLstmConfig
from firecast.models.sample import GridGraph
from firecast.nn import ops
from firecast.nn.params import ParamStore
from firecast.nn.tensor import Tensor

from .forecast_model import ForecastModel
from .readout import MlpReadout

GATES = ("i", "f", "o", "g")


def convlstm_cell_step(
    x: Tensor,
    h_prev: Tensor,
    c_prev: Tensor,
    store: ParamStore,
    prefix: str = "cell",
) -> Tuple[Tensor, Tensor]:
    """One Conv-LSTM update, no peephole terms.

        i = σ(W_xi * X + W_hi * h + b_i)
        f = σ(W_xf * X + W_hf * h + b_f)
        o = σ(W_xo * X + W_ho * h + b_o)
        g = tanh(W_xg * X + W_hg * h + b_g)
        c' = f ⊙ c + i ⊙ g
        h' = o ⊙ tanh(c')

    Shapes: x [B, F, G, G]; h_prev, c_prev [B, C, G, G]. Kernels are stored
    fused over the gates (i, f, o, g): W_x [4C, F, k, k], W_h [4C, C, k, k],
    b [4C].
    """
    channels = h_prev.shape[-3]
    pre = ops.add(
        ops.conv2d_same(x, store[f"{prefix}.W_x"], store[f"{prefix}.b"]),
        ops.conv2d_same(h_prev, store[f"{prefix}.W_h"]),
    )
    i, f, o, g = ops.split(pre, [channels] * 4, axis=-3)
    i, f, o, g = ops.sigmoid(i), ops.sigmoid(f), ops.sigmoid(o), ops.tanh(g)
    c = ops.add(ops.hadamard(f, c_prev), ops.hadamard(i, g))
    h = ops.hadamard(o, ops.tanh(c))
    return h, c


class ConvLstmModel(ForecastModel):
    """Conv-LSTM cell iterated over ts steps, flattened final state into an MLP."""

    architecture = "convlstm"

    def __init__(self, config: Optional[ConvLstmConfig] = None, n_features: int = 14, seed: int = 0):
        super().__init__(config or ConvLstmConfig(), n_features, seed)

    @override
    def build(self, rng: np.random.Generator) -> None:
        c = self.config
        k = c.kernel_size
        fan_x = self.n_features * k * k
        fan_h = c.hidden * k * k
        self.store.add("cell.W_x", (4 * c.hidden, self.n_features, k, k), rng, fan_in=fan_x)
        self.store.add("cell.W_h", (4 * c.hidden, c.hidden, k, k), rng, fan_in=fan_h)
        self.store.add("cell.b", (4 * c.hidden,), rng, fan_in=fan_h)
        self.readout = MlpReadout(self.store, "mlp", c.hidden * c.grid_size ** 2, c.mlp_widths, rng)

    @override
    def forward(
        self,
        features: np.ndarray,
        graph: Optional[GridGraph] = None,
        training: bool = False,
        rng: Optional[np.random.Generator] = None,
    ) -> Tensor:
        return convlstm_forward(self, features)


def convlstm_forward(model: ConvLstmModel, features: np.ndarray) -> Tensor:
    """Zero initial state, ts cell steps, flatten h, MLP, sigmoid."""
    c = model.config
    features = model._check_features(features, grid_size=c.grid_size)
    batch, steps = features.shape[:2]
    state_shape = (batch, c.hidden, c.grid_size, c.grid_size)
    h = Tensor(np.zeros(state_shape))
    cell = Tensor(np.zeros(state_shape))
    for t in range(steps):
        h, cell = convlstm_cell_step(Tensor(features[:, t]), h, cell, model.store)
    flat = ops.reshape(h, (batch, c.hidden * c.grid_size ** 2))
    return ops.sigmoid(model.readout(flat))

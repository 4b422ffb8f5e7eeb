"""T-GCN over the window's grid-graph with attention and MLP readout."""

from typing import Optional, Sequence, Tuple

import numpy as np
from typing_extensions import override

from firecast.models.model_config import TgcnConfig
from firecast.models.sample import GridGraph
from firecast.nn import ops
from firecast.nn.attention import MultiHeadSelfAttention
from firecast.nn.params import ParamStore
from firecast.nn.tensor import Tensor, as_tensor
from firecast.utils.errors import FirecastValidationError, ShapeError

from .forecast_model import ForecastModel
from .readout import MlpReadout

GCN_PREFIXES: Tuple[str, str, str] = ("gcn_u", "gcn_r", "gcn_c")


def gcn2_forward(a_hat_norm, x: Tensor, w0: Tensor, w1: Tensor) -> Tensor:
    """σ(Â · relu(Â · X · W0) · W1), no biases; X is [n, d] or [B, n, d]."""
    a = as_tensor(a_hat_norm)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or x.shape[-2] != a.shape[0]:
        raise ShapeError("gcn2_forward: adjacency/vertex mismatch", shapes={"a_hat_norm": a.shape, "x": x.shape})
    hidden = ops.relu(ops.matmul(a, ops.dense(x, w0)))
    return ops.sigmoid(ops.matmul(a, ops.dense(hidden, w1)))


def check_distinct_gcns(store: ParamStore, prefixes: Sequence[str] = GCN_PREFIXES) -> None:
    """Raise unless f_u, f_r and f_c own separate weight tensors."""
    if len(set(prefixes)) != len(prefixes):
        raise FirecastValidationError("the three GCNs need distinct parameter prefixes", field="gcn")
    owners = []
    for prefix in prefixes:
        for part in ("W0", "W1"):
            name = f"{prefix}.{part}"
            tensor = store[name]
            for other_name, other in owners:
                if other is tensor or np.shares_memory(other.data, tensor.data):
                    raise FirecastValidationError(f"'{name}' shares parameters with '{other_name}'", field="gcn")
            owners.append((name, tensor))


def tgcn_cell_step(
    a_hat_norm,
    x: Tensor,
    h_prev: Tensor,
    store: ParamStore,
    prefixes: Sequence[str] = GCN_PREFIXES,
) -> Tensor:
    """One T-GCN update per vertex: x [.., n, d], h_prev [.., n, H].

        u = σ(W_u (f_u(Â, X) ⊕ h) + b_u)
        r = σ(W_r (f_r(Â, X) ⊕ h) + b_r)
        c = tanh(W_c (f_c(Â, X) ⊕ (r ⊙ h)) + b_c)
        h' = u ⊙ h + (1 - u) ⊙ c
    """
    f_u, f_r, f_c = (
        gcn2_forward(a_hat_norm, x, store[f"{p}.W0"], store[f"{p}.W1"]) for p in prefixes
    )
    u = ops.sigmoid(ops.dense(ops.concat([f_u, h_prev], axis=-1), store["cell.W_u"], store["cell.b_u"]))
    r = ops.sigmoid(ops.dense(ops.concat([f_r, h_prev], axis=-1), store["cell.W_r"], store["cell.b_r"]))
    c = ops.tanh(
        ops.dense(ops.concat([f_c, ops.hadamard(r, h_prev)], axis=-1), store["cell.W_c"], store["cell.b_c"])
    )
    return ops.add(ops.hadamard(u, h_prev), ops.hadamard(ops.one_minus(u), c))


class TgcnModel(ForecastModel):
    """T-GCN cell over ts steps, vertex self-attention, weighted pooling, MLP."""

    architecture = "tgcn"

    def __init__(self, config: Optional[TgcnConfig] = None, n_features: int = 14, seed: int = 0):
        super().__init__(config or TgcnConfig(), n_features, seed)

    @override
    def build(self, rng: np.random.Generator) -> None:
        c = self.config
        for prefix in GCN_PREFIXES:
            self.store.add(f"{prefix}.W0", (self.n_features, c.gcn_hidden), rng, fan_in=self.n_features)
            self.store.add(f"{prefix}.W1", (c.gcn_hidden, c.gcn_hidden), rng, fan_in=c.gcn_hidden)
        fan = c.gcn_hidden + c.hidden
        for gate in ("u", "r", "c"):
            self.store.add(f"cell.W_{gate}", (fan, c.hidden), rng, fan_in=fan)
            self.store.add(f"cell.b_{gate}", (c.hidden,), rng, fan_in=fan)
        check_distinct_gcns(self.store)
        self.attention = MultiHeadSelfAttention(
            self.store, "attn", d_in=c.hidden, d_model=c.attention_dim, heads=c.attention_heads, rng=rng
        )
        self.store.add("pool.w", (1, c.n_vertices), init="ones")
        self.readout = MlpReadout(self.store, "mlp", c.attention_dim, c.mlp_widths, rng)

    @override
    def forward(
        self,
        features: np.ndarray,
        graph: Optional[GridGraph] = None,
        training: bool = False,
        rng: Optional[np.random.Generator] = None,
    ) -> Tensor:
        return tgcn_forward(self, features, graph)


def vertex_features(features: np.ndarray) -> np.ndarray:
    """[B, ts, F, G, G] -> [B, ts, n, F] with row-major vertex ids."""
    batch, steps, channels, size, _ = features.shape
    return features.reshape(batch, steps, channels, size * size).transpose(0, 1, 3, 2)


def tgcn_forward(model: TgcnModel, features: np.ndarray, graph: Optional[GridGraph]) -> Tensor:
    """Zero initial state, ts cell steps, attention over vertices, pooled MLP, sigmoid."""
    c = model.config
    if graph is None:
        raise ShapeError("tgcn: a grid-graph is required")
    features = model._check_features(features, grid_size=2 * c.radius + 1)
    if graph.n != c.n_vertices:
        raise ShapeError("tgcn: graph does not match the window", shapes={"graph.n": graph.n, "n": c.n_vertices})
    a_hat = Tensor(graph.a_hat_norm)
    x = vertex_features(features)
    batch, steps = x.shape[:2]
    h = Tensor(np.zeros((batch, c.n_vertices, c.hidden)))
    for t in range(steps):
        h = tgcn_cell_step(a_hat, Tensor(x[:, t]), h, model.store)
    attended = model.attention(h)
    pooled = ops.scale(ops.matmul(model.store["pool.w"], attended), 1.0 / c.n_vertices)
    pooled = ops.reshape(pooled, (batch, c.attention_dim))
    return ops.sigmoid(model.readout(pooled))

"""Multi-head scaled dot-product self-attention."""

import math
from typing import Tuple, Union

import numpy as np

from firecast.utils.errors import ShapeError

from . import ops
from .params import ParamStore
from .tensor import Tensor


class MultiHeadSelfAttention:
    """Self-attention over the rows of X: [..., n, d_in] -> [..., n, d_model].

    Parameters live in the given ParamStore under ``prefix``:
    W_q, W_k, W_v [d_in, d_model], W_o [d_model, d_model] and their biases.
    """

    def __init__(
        self,
        store: ParamStore,
        prefix: str,
        d_in: int,
        d_model: int = 256,
        heads: int = 4,
        rng: np.random.Generator = None,
    ):
        if heads < 1 or d_model % heads != 0:
            raise ShapeError(f"d_model ({d_model}) must be divisible by heads ({heads})")
        self.store = store
        self.prefix = prefix
        self.d_in = d_in
        self.d_model = d_model
        self.heads = heads
        self.d_k = d_model // heads
        if rng is not None:
            for part in ("q", "k", "v"):
                store.add(f"{prefix}.W_{part}", (d_in, d_model), rng, fan_in=d_in)
                store.add(f"{prefix}.b_{part}", (d_model,), rng, fan_in=d_in)
            store.add(f"{prefix}.W_o", (d_model, d_model), rng, fan_in=d_model)
            store.add(f"{prefix}.b_o", (d_model,), rng, fan_in=d_model)

    def _param(self, name: str) -> Tensor:
        return self.store[f"{self.prefix}.{name}"]

    def _split_heads(self, t: Tensor) -> Tensor:
        # [..., n, D] -> [..., H, n, d_k]
        t = ops.reshape(t, t.shape[:-1] + (self.heads, self.d_k))
        return ops.swapaxes(t, -3, -2)

    def __call__(self, x: Tensor, return_weights: bool = False) -> Union[Tensor, Tuple[Tensor, Tensor]]:
        if x.ndim < 2 or x.shape[-1] != self.d_in:
            raise ShapeError("attention: input shape mismatch", shapes={"x": x.shape, "d_in": self.d_in})
        q = self._split_heads(ops.dense(x, self._param("W_q"), self._param("b_q")))
        k = self._split_heads(ops.dense(x, self._param("W_k"), self._param("b_k")))
        v = self._split_heads(ops.dense(x, self._param("W_v"), self._param("b_v")))

        scores = ops.scale(ops.matmul(q, ops.swapaxes(k, -1, -2)), 1.0 / math.sqrt(self.d_k))
        weights = ops.softmax(scores, axis=-1)
        context = ops.matmul(weights, v)

        # [..., H, n, d_k] -> [..., n, D]
        context = ops.swapaxes(context, -3, -2)
        context = ops.reshape(context, context.shape[:-2] + (self.d_model,))
        out = ops.dense(context, self._param("W_o"), self._param("b_o"))
        if return_weights:
            return out, weights
        return out


def multi_head_self_attention(x: Tensor, store: ParamStore, prefix: str, heads: int = 4) -> Tensor:
    """Functional form over parameters already registered under ``prefix``."""
    d_in, d_model = store[f"{prefix}.W_q"].shape
    return MultiHeadSelfAttention(store, prefix, d_in=d_in, d_model=d_model, heads=heads)(x)

"""MLP readout shared by the Conv-LSTM and T-GCN models."""

from typing import List, Sequence

import numpy as np

from firecast.nn import ops
from firecast.nn.params import ParamStore
from firecast.nn.tensor import Tensor


class MlpReadout:
    """dense -> relu per hidden width, then a dense layer to one logit.

    Parameters: ``{prefix}.W{i}``, ``{prefix}.b{i}`` for i = 0..len(widths).
    """

    def __init__(self, store: ParamStore, prefix: str, d_in: int, widths: Sequence[int], rng: np.random.Generator):
        self.store = store
        self.prefix = prefix
        self.sizes: List[int] = [d_in] + list(widths) + [1]
        for i, (fan_in, fan_out) in enumerate(zip(self.sizes[:-1], self.sizes[1:])):
            store.add(f"{prefix}.W{i}", (fan_in, fan_out), rng, fan_in=fan_in)
            store.add(f"{prefix}.b{i}", (fan_out,), rng, fan_in=fan_in)

    @property
    def depth(self) -> int:
        return len(self.sizes) - 1

    def __call__(self, x: Tensor) -> Tensor:
        """[B, d_in] -> logits [B]."""
        for i in range(self.depth):
            x = ops.dense(x, self.store[f"{self.prefix}.W{i}"], self.store[f"{self.prefix}.b{i}"])
            if i < self.depth - 1:
                x = ops.relu(x)
        return ops.reshape(x, (x.shape[0],))

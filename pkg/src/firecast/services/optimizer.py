"""Plain SGD with weight decay and the SGDR learning-rate schedule."""

import math

import numpy as np

from firecast.models.train_config import TrainConfig
from firecast.nn.params import ParamStore
from firecast.utils.errors import FirecastValidationError


def sgdr_lr(epoch: int, config: TrainConfig) -> float:
    """Cosine-annealed learning rate with a warm restart at every cycle start.

    Within a cycle of length T_i at position T_cur:
    eta_min + (base_lr - eta_min) * (1 + cos(pi * T_cur / T_i)) / 2.

    Raises:
        FirecastValidationError: epoch outside [0, sum(cycles)).
    """
    total = sum(config.sgdr_cycles)
    if not 0 <= epoch < total:
        raise FirecastValidationError(f"epoch {epoch} outside [0, {total})", field="epoch")
    t_cur = epoch
    for cycle in config.sgdr_cycles:
        if t_cur < cycle:
            return config.eta_min + 0.5 * (config.base_lr - config.eta_min) * (1.0 + math.cos(math.pi * t_cur / cycle))
        t_cur -= cycle
    raise AssertionError("unreachable")


def sgd_step(store: ParamStore, lr: float, weight_decay: float = 0.0) -> None:
    """w <- w - lr * (g + weight_decay * w) for every parameter, biases included.

    Raises:
        FirecastValidationError: A parameter has no gradient buffer.
    """
    for name, tensor in store.items():
        if tensor.grad is None:
            raise FirecastValidationError(f"parameter '{name}' has no gradient", field="grads")
        tensor.data = tensor.data - lr * (tensor.grad + weight_decay * tensor.data)


def grad_norm(store: ParamStore) -> float:
    """Global L2 norm of all gradients."""
    return float(math.sqrt(sum(float(np.sum(t.grad * t.grad)) for t in store.parameters() if t.grad is not None)))

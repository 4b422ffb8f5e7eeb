"""Finite-difference verification of reverse-mode gradients."""

from typing import Callable, Optional, Sequence

import numpy as np

from .tensor import Tensor


def grad_check(
    f: Callable[[], Tensor],
    params: Sequence[Tensor],
    eps: float = 1e-5,
    max_coords: Optional[int] = 20,
    rng: Optional[np.random.Generator] = None,
) -> float:
    """Compare reverse-mode gradients against central differences.

    Args:
        f: Rebuilds the computation from current parameter values and
            returns a scalar tensor. Must be deterministic.
        params: Leaf tensors to check.
        eps: Finite-difference step.
        max_coords: Coordinates sampled per parameter; None checks all.
        rng: Sampling stream for coordinates.

    Returns:
        max |g_ad - g_fd| / max(1, |g_ad|, |g_fd|) over checked coordinates.
    """
    rng = rng if rng is not None else np.random.default_rng(0)
    for p in params:
        p.zero_grad()
    f().backward()
    analytic = [p.grad.copy() for p in params]

    worst = 0.0
    for p, g_ad in zip(params, analytic):
        flat = p.data.reshape(-1)
        if max_coords is None or flat.size <= max_coords:
            coords = np.arange(flat.size)
        else:
            coords = rng.choice(flat.size, size=max_coords, replace=False)
        for i in coords:
            original = flat[i]
            flat[i] = original + eps
            f_plus = f().item()
            flat[i] = original - eps
            f_minus = f().item()
            flat[i] = original
            g_fd = (f_plus - f_minus) / (2.0 * eps)
            a = float(g_ad.reshape(-1)[i])
            err = abs(a - g_fd) / max(1.0, abs(a), abs(g_fd))
            worst = max(worst, err)
    return worst

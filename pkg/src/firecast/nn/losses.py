"""Loss functions."""

import numpy as np

from firecast.utils.errors import ShapeError

from .tensor import Tensor

BCE_EPS = 1e-12


def bce_loss(scores: Tensor, labels, eps: float = BCE_EPS) -> Tensor:
    """Mean binary cross entropy -[y ln p + (1 - y) ln(1 - p)].

    Scores are clamped to [eps, 1 - eps] before the logarithms; the gradient
    is evaluated at the clamped score.

    Args:
        scores: Probabilities, any shape.
        labels: 0/1 targets with the same shape as scores.

    Returns:
        0-d tensor holding the mean loss.
    """
    y = np.asarray(labels, dtype=np.float64)
    if y.shape != scores.shape:
        raise ShapeError("bce_loss: scores/labels shape mismatch", shapes={"scores": scores.shape, "labels": y.shape})
    p = np.clip(scores.data, eps, 1.0 - eps)
    n = max(p.size, 1)
    loss = -(y * np.log(p) + (1.0 - y) * np.log(1.0 - p)).sum() / n

    def backward(g):
        return (float(g) * (-y / p + (1.0 - y) / (1.0 - p)) / n,)

    return Tensor.from_op(np.asarray(loss), (scores,), backward)

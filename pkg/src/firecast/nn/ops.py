"""Differentiable operations used by the forecasting models.

Shapes are checked strictly; the only broadcasting is over leading batch
dimensions in ``matmul`` and ``dense`` and a bias vector in ``dense`` and
``conv2d_same``.
"""

from typing import List, Optional, Sequence, Union

import numpy as np

from firecast.utils.errors import FirecastValidationError, ShapeError

from .tensor import Tensor, as_tensor


def _sum_to_shape(grad: np.ndarray, shape: tuple) -> np.ndarray:
    """Reduce a broadcast gradient back to ``shape``."""
    while grad.ndim > len(shape):
        grad = grad.sum(axis=0)
    for axis, size in enumerate(shape):
        if size == 1 and grad.shape[axis] != 1:
            grad = grad.sum(axis=axis, keepdims=True)
    return grad


def _same_shape(op: str, a: Tensor, b: Tensor) -> None:
    if a.shape != b.shape:
        raise ShapeError(f"{op}: shape mismatch", shapes={"a": a.shape, "b": b.shape})


# Elementwise


def add(a: Tensor, b: Tensor) -> Tensor:
    _same_shape("add", a, b)
    return Tensor.from_op(a.data + b.data, (a, b), lambda g: (g, g))


def sub(a: Tensor, b: Tensor) -> Tensor:
    _same_shape("sub", a, b)
    return Tensor.from_op(a.data - b.data, (a, b), lambda g: (g, -g))


def hadamard(a: Tensor, b: Tensor) -> Tensor:
    """Point-wise product a ⊙ b."""
    _same_shape("hadamard", a, b)
    a_data, b_data = a.data, b.data
    return Tensor.from_op(a_data * b_data, (a, b), lambda g: (g * b_data, g * a_data))


def scale(x: Tensor, factor: float) -> Tensor:
    return Tensor.from_op(x.data * factor, (x,), lambda g: (g * factor,))


def add_scalar(x: Tensor, value: float) -> Tensor:
    return Tensor.from_op(x.data + value, (x,), lambda g: (g,))


def one_minus(x: Tensor) -> Tensor:
    """1 - x."""
    return Tensor.from_op(1.0 - x.data, (x,), lambda g: (-g,))


def sigmoid(x: Tensor) -> Tensor:
    # tanh form is stable for large |x|
    out = 0.5 * (1.0 + np.tanh(0.5 * x.data))
    return Tensor.from_op(out, (x,), lambda g: (g * out * (1.0 - out),))


def tanh(x: Tensor) -> Tensor:
    out = np.tanh(x.data)
    return Tensor.from_op(out, (x,), lambda g: (g * (1.0 - out * out),))


def relu(x: Tensor) -> Tensor:
    positive = x.data > 0
    return Tensor.from_op(np.where(positive, x.data, 0.0), (x,), lambda g: (g * positive,))


def softmax(x: Tensor, axis: int = -1) -> Tensor:
    shifted = x.data - x.data.max(axis=axis, keepdims=True)
    e = np.exp(shifted)
    out = e / e.sum(axis=axis, keepdims=True)

    def backward(g):
        return (out * (g - (g * out).sum(axis=axis, keepdims=True)),)

    return Tensor.from_op(out, (x,), backward)


# Shape manipulation


def concat(tensors: Sequence[Tensor], axis: int = -1) -> Tensor:
    """Concatenation ⊕ along ``axis``; all other dimensions must agree."""
    if not tensors:
        raise ShapeError("concat: no tensors given")
    ndim = tensors[0].ndim
    ax = axis % ndim
    for t in tensors[1:]:
        if t.ndim != ndim or t.shape[:ax] + t.shape[ax + 1:] != tensors[0].shape[:ax] + tensors[0].shape[ax + 1:]:
            raise ShapeError("concat: incompatible shapes", shapes={"shapes": [t.shape for t in tensors]})
    sizes = [t.shape[ax] for t in tensors]
    bounds = np.cumsum(sizes)[:-1]

    def backward(g):
        return tuple(np.split(g, bounds, axis=ax))

    return Tensor.from_op(np.concatenate([t.data for t in tensors], axis=ax), tuple(tensors), backward)


def split(x: Tensor, sizes: Sequence[int], axis: int = -1) -> List[Tensor]:
    """Inverse of concat: pieces of the given sizes along ``axis``."""
    ax = axis % x.ndim
    if sum(sizes) != x.shape[ax]:
        raise ShapeError("split: sizes do not cover the axis", shapes={"x": x.shape, "sizes": list(sizes)})
    pieces = []
    start = 0
    for size in sizes:
        index = [slice(None)] * x.ndim
        index[ax] = slice(start, start + size)
        index = tuple(index)

        def backward(g, index=index):
            full = np.zeros_like(x.data)
            full[index] = g
            return (full,)

        pieces.append(Tensor.from_op(x.data[index], (x,), backward))
        start += size
    return pieces


def reshape(x: Tensor, shape: Sequence[int]) -> Tensor:
    original = x.shape
    return Tensor.from_op(x.data.reshape(shape), (x,), lambda g: (g.reshape(original),))


def swapaxes(x: Tensor, axis1: int, axis2: int) -> Tensor:
    return Tensor.from_op(np.swapaxes(x.data, axis1, axis2), (x,), lambda g: (np.swapaxes(g, axis1, axis2),))


def mean(x: Tensor) -> Tensor:
    """Mean of all entries, as a 0-d tensor."""
    n = x.size

    def backward(g):
        return (np.full_like(x.data, float(g) / n),)

    return Tensor.from_op(np.asarray(x.data.mean()), (x,), backward)


def sum_all(x: Tensor) -> Tensor:
    return Tensor.from_op(np.asarray(x.data.sum()), (x,), lambda g: (np.full_like(x.data, float(g)),))


# Linear maps


def matmul(a: Tensor, b: Tensor) -> Tensor:
    """Batched matrix product with broadcasting over leading dimensions."""
    if a.ndim < 2 or b.ndim < 2 or a.shape[-1] != b.shape[-2]:
        raise ShapeError("matmul: shape mismatch", shapes={"a": a.shape, "b": b.shape})
    a_data, b_data = a.data, b.data

    def backward(g):
        ga = _sum_to_shape(np.matmul(g, np.swapaxes(b_data, -1, -2)), a_data.shape) if a.requires_grad else None
        gb = _sum_to_shape(np.matmul(np.swapaxes(a_data, -1, -2), g), b_data.shape) if b.requires_grad else None
        return ga, gb

    return Tensor.from_op(np.matmul(a_data, b_data), (a, b), backward)


def dense(x: Tensor, W: Tensor, b: Optional[Tensor] = None) -> Tensor:
    """x W + b over the last axis of x: [..., d] x [d, m] + [m] -> [..., m]."""
    if W.ndim != 2 or x.shape[-1] != W.shape[0]:
        raise ShapeError("dense: shape mismatch", shapes={"x": x.shape, "W": W.shape})
    if b is not None and b.shape != (W.shape[1],):
        raise ShapeError("dense: bias shape mismatch", shapes={"W": W.shape, "b": b.shape})
    x_data, W_data = x.data, W.data
    out = x_data @ W_data
    if b is not None:
        out = out + b.data

    def backward(g):
        g2 = g.reshape(-1, g.shape[-1])
        x2 = x_data.reshape(-1, x_data.shape[-1])
        gx = g @ W_data.T if x.requires_grad else None
        gW = x2.T @ g2 if W.requires_grad else None
        if b is None:
            return gx, gW
        return gx, gW, g2.sum(axis=0)

    parents = (x, W) if b is None else (x, W, b)
    return Tensor.from_op(out, parents, backward)


def conv2d_same(x: Tensor, K: Tensor, b: Optional[Tensor] = None) -> Tensor:
    """Zero-padded cross-correlation keeping the spatial size.

    Args:
        x: [C_in, H, W] or [B, C_in, H, W].
        K: [C_out, C_in, kh, kw] with odd kh, kw.
        b: [C_out] or None.

    Returns:
        [C_out, H, W] or [B, C_out, H, W].
    """
    if K.ndim != 4:
        raise ShapeError("conv2d_same: kernel must be 4-d", shapes={"K": K.shape})
    c_out, c_in, kh, kw = K.shape
    if kh % 2 == 0 or kw % 2 == 0:
        raise ShapeError("conv2d_same: kernel size must be odd", shapes={"K": K.shape})
    unbatched = x.ndim == 3
    if x.ndim not in (3, 4) or x.shape[-3] != c_in:
        raise ShapeError("conv2d_same: input/kernel channel mismatch", shapes={"x": x.shape, "K": K.shape})
    if b is not None and b.shape != (c_out,):
        raise ShapeError("conv2d_same: bias shape mismatch", shapes={"K": K.shape, "b": b.shape})

    xb = x.data[None] if unbatched else x.data
    _, _, height, width = xb.shape
    ph, pw = kh // 2, kw // 2
    xp = np.pad(xb, ((0, 0), (0, 0), (ph, ph), (pw, pw)))
    k_data = K.data

    out = np.zeros((xb.shape[0], c_out, height, width))
    for u in range(kh):
        for v in range(kw):
            out += np.einsum("oc,bchw->bohw", k_data[:, :, u, v], xp[:, :, u:u + height, v:v + width])
    if b is not None:
        out += b.data[None, :, None, None]

    def backward(g):
        gb4 = g[None] if unbatched else g
        gK = np.zeros_like(k_data) if K.requires_grad else None
        gxp = np.zeros_like(xp) if x.requires_grad else None
        for u in range(kh):
            for v in range(kw):
                window = xp[:, :, u:u + height, v:v + width]
                if gK is not None:
                    gK[:, :, u, v] = np.einsum("bohw,bchw->oc", gb4, window)
                if gxp is not None:
                    gxp[:, :, u:u + height, v:v + width] += np.einsum("oc,bohw->bchw", k_data[:, :, u, v], gb4)
        gx = None
        if gxp is not None:
            gx = gxp[:, :, ph:ph + height, pw:pw + width]
            gx = gx[0] if unbatched else gx
        if b is None:
            return gx, gK
        return gx, gK, gb4.sum(axis=(0, 2, 3))

    result = out[0] if unbatched else out
    parents = (x, K) if b is None else (x, K, b)
    return Tensor.from_op(result, parents, backward)


# Regularization


def dropout(
    x: Tensor,
    p: float = 0.1,
    training: bool = True,
    rng: Union[np.random.Generator, int, None] = None,
) -> Tensor:
    """Inverted dropout: zero with probability p, scale survivors by 1/(1-p).

    Training mode needs an explicit generator or seed in ``rng``.
    """
    if not 0.0 <= p < 1.0:
        raise ShapeError(f"dropout probability must be in [0, 1), got {p}")
    if not training or p == 0.0:
        return x
    if rng is None:
        raise FirecastValidationError("dropout in training mode needs a seeded rng", field="rng")
    generator = rng if isinstance(rng, np.random.Generator) else np.random.default_rng(rng)
    keep = (generator.random(x.shape) >= p) / (1.0 - p)
    return Tensor.from_op(x.data * keep, (x,), lambda g: (g * keep,))


def constant(value) -> Tensor:
    """Constant (non-trainable) tensor."""
    return as_tensor(value)

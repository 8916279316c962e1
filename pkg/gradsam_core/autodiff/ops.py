"""Differentiable operations over 2-D tensors.

Every op takes ``Node`` operands on the same tape and returns a new ``Node``
whose backward rule accumulates into the operands' gradients. Broadcasting is
limited to adding a 1×q row vector to every row of a p×q matrix.
"""

import math
from typing import Optional, Sequence

import numpy as np
from numpy.typing import ArrayLike

from gradsam_core.autodiff.tape import Node, Tensor
from gradsam_core.errors import ContractError, DimensionError

_GELU_C = math.sqrt(2.0 / math.pi)


def _require_same_shape(a: Node, b: Node, op: str) -> None:
    if a.shape != b.shape:
        raise DimensionError(f"{op}: shapes {a.shape} and {b.shape} differ")


def matmul(a: Node, b: Node) -> Node:
    """Matrix product ``a @ b`` for a: p×q, b: q×r."""
    if a.shape[1] != b.shape[0]:
        raise DimensionError(f"matmul: inner extents differ, {a.shape} @ {b.shape}")

    def backward(grad: Tensor) -> None:
        a.accumulate(grad @ b.value.T)
        b.accumulate(a.value.T @ grad)

    return a.tape.record(a.value @ b.value, (a, b), "matmul", backward)


def add(a: Node, b: Node) -> Node:
    """Elementwise sum; ``b`` may be a 1×q row vector added to each row of ``a``."""
    row_bias = b.shape[0] == 1 and a.shape[0] != 1 and a.shape[1] == b.shape[1]
    if not row_bias:
        _require_same_shape(a, b, "add")

    def backward(grad: Tensor) -> None:
        a.accumulate(grad)
        b.accumulate(grad.sum(axis=0, keepdims=True) if row_bias else grad)

    return a.tape.record(a.value + b.value, (a, b), "add", backward)


def hadamard(a: Node, b: Node) -> Node:
    """Elementwise product of two same-shape tensors."""
    _require_same_shape(a, b, "hadamard")

    def backward(grad: Tensor) -> None:
        a.accumulate(grad * b.value)
        b.accumulate(grad * a.value)

    return a.tape.record(a.value * b.value, (a, b), "hadamard", backward)


def scalar_scale(a: Node, c: float) -> Node:
    """Multiply every entry by the constant ``c``."""
    c = a.tape.dtype.type(c)

    def backward(grad: Tensor) -> None:
        a.accumulate(grad * c)

    return a.tape.record(a.value * c, (a,), "scalar_scale", backward)


def transpose(a: Node) -> Node:
    def backward(grad: Tensor) -> None:
        a.accumulate(grad.T)

    return a.tape.record(np.ascontiguousarray(a.value.T), (a,), "transpose", backward)


def row_sum(a: Node) -> Node:
    """Sum each row: p×q → p×1."""

    def backward(grad: Tensor) -> None:
        a.accumulate(np.broadcast_to(grad, a.shape))

    return a.tape.record(a.value.sum(axis=1, keepdims=True), (a,), "row_sum", backward)


def sum_all(a: Node) -> Node:
    """Sum of every entry as a 1×1 tensor."""

    def backward(grad: Tensor) -> None:
        a.accumulate(np.full(a.shape, grad[0, 0], dtype=a.value.dtype))

    return a.tape.record(a.value.sum().reshape(1, 1), (a,), "sum_all", backward)


def relu(a: Node) -> Node:
    positive = a.value > 0

    def backward(grad: Tensor) -> None:
        a.accumulate(grad * positive)

    return a.tape.record(np.where(positive, a.value, 0), (a,), "relu", backward)


def tanh(a: Node) -> Node:
    out = np.tanh(a.value)

    def backward(grad: Tensor) -> None:
        a.accumulate(grad * (1 - out * out))

    return a.tape.record(out, (a,), "tanh", backward)


def gelu(a: Node) -> Node:
    """GELU, tanh approximation."""
    x = a.value
    inner = _GELU_C * (x + 0.044715 * x**3)
    t = np.tanh(inner)
    out = 0.5 * x * (1 + t)

    def backward(grad: Tensor) -> None:
        d_inner = _GELU_C * (1 + 3 * 0.044715 * x**2)
        local = 0.5 * (1 + t) + 0.5 * x * (1 - t * t) * d_inner
        a.accumulate(grad * local)

    return a.tape.record(out, (a,), "gelu", backward)


def softmax_rows(a: Node, key_mask: Optional[ArrayLike] = None) -> Node:
    """Row-wise softmax.

    ``key_mask`` is a length-q boolean vector; columns where it is false get
    probability exactly 0 (the −∞ pre-softmax logit, realized without ever
    materializing an infinity).
    """
    x = a.value
    if key_mask is None:
        keep = np.ones(x.shape[1], dtype=bool)
    else:
        keep = np.asarray(key_mask, dtype=bool)
        if keep.shape != (x.shape[1],):
            raise DimensionError(
                f"softmax_rows: key mask of length {keep.shape} for {x.shape[1]} columns"
            )
        if not keep.any():
            raise ContractError("softmax_rows: key mask hides every column")

    row_max = x[:, keep].max(axis=1, keepdims=True)
    exp = np.where(keep, np.exp(np.where(keep, x - row_max, 0)), 0)
    out = exp / exp.sum(axis=1, keepdims=True)

    def backward(grad: Tensor) -> None:
        inner = (grad * out).sum(axis=1, keepdims=True)
        a.accumulate(out * (grad - inner))

    return a.tape.record(out, (a,), "softmax_rows", backward)


def layer_norm(x: Node, gamma: Node, beta: Node, eps: float = 1e-12) -> Node:
    """Per-row standardization followed by a 1×d affine (gamma, beta)."""
    if gamma.shape != (1, x.shape[1]) or beta.shape != (1, x.shape[1]):
        raise DimensionError(
            f"layer_norm: affine shapes {gamma.shape}/{beta.shape} for input {x.shape}"
        )
    d = x.shape[1]
    mean = x.value.mean(axis=1, keepdims=True)
    centered = x.value - mean
    var = (centered * centered).mean(axis=1, keepdims=True)
    inv_std = 1.0 / np.sqrt(var + eps)
    normed = centered * inv_std
    out = normed * gamma.value + beta.value

    def backward(grad: Tensor) -> None:
        gamma.accumulate((grad * normed).sum(axis=0, keepdims=True))
        beta.accumulate(grad.sum(axis=0, keepdims=True))
        g = grad * gamma.value
        x.accumulate(
            inv_std
            * (
                g
                - g.sum(axis=1, keepdims=True) / d
                - normed * (g * normed).sum(axis=1, keepdims=True) / d
            )
        )

    return x.tape.record(out, (x, gamma, beta), "layer_norm", backward)


def take_rows(table: Node, indices: Sequence[int]) -> Node:
    """Gather rows of ``table`` (embedding lookup, [CLS] row selection)."""
    idx = np.asarray(indices, dtype=np.int64)
    if idx.ndim != 1:
        raise DimensionError("take_rows: indices must be one-dimensional")
    if idx.size and (idx.min() < 0 or idx.max() >= table.shape[0]):
        raise DimensionError(
            f"take_rows: index out of range for table with {table.shape[0]} rows"
        )

    def backward(grad: Tensor) -> None:
        full = np.zeros_like(table.value)
        np.add.at(full, idx, grad)
        table.accumulate(full)

    return table.tape.record(table.value[idx], (table,), "take_rows", backward)


def concat_cols(parts: Sequence[Node]) -> Node:
    """Horizontal concatenation of same-height tensors."""
    if not parts:
        raise ContractError("concat_cols: nothing to concatenate")
    rows = parts[0].shape[0]
    for part in parts:
        if part.shape[0] != rows:
            raise DimensionError(f"concat_cols: row counts {rows} and {part.shape[0]} differ")
    bounds = np.cumsum([0] + [p.shape[1] for p in parts])

    def backward(grad: Tensor) -> None:
        for part, start, stop in zip(parts, bounds[:-1], bounds[1:]):
            part.accumulate(grad[:, start:stop])

    return parts[0].tape.record(
        np.concatenate([p.value for p in parts], axis=1), tuple(parts), "concat_cols", backward
    )


def element(a: Node, row: int, col: int) -> Node:
    """Select one entry as a 1×1 tensor."""
    if not (0 <= row < a.shape[0] and 0 <= col < a.shape[1]):
        raise DimensionError(f"element: ({row}, {col}) outside shape {a.shape}")

    def backward(grad: Tensor) -> None:
        full = np.zeros_like(a.value)
        full[row, col] = grad[0, 0]
        a.accumulate(full)

    return a.tape.record(a.value[row : row + 1, col : col + 1].copy(), (a,), "element", backward)


def softmax_cross_entropy(logits: Node, label: int) -> Node:
    """Negative log-likelihood of ``label`` under softmax(logits); logits is 1×n."""
    if logits.shape[0] != 1:
        raise DimensionError(f"softmax_cross_entropy: expected 1×n logits, got {logits.shape}")
    if not 0 <= label < logits.shape[1]:
        raise ContractError(f"softmax_cross_entropy: label {label} outside {logits.shape[1]} classes")
    z = logits.value - logits.value.max()
    log_norm = np.log(np.exp(z).sum())
    probs = np.exp(z - log_norm)
    loss = np.array([[log_norm - z[0, label]]])

    def backward(grad: Tensor) -> None:
        local = probs.copy()
        local[0, label] -= 1
        logits.accumulate(grad[0, 0] * local)

    return logits.tape.record(loss, (logits,), "softmax_cross_entropy", backward)


def logistic_loss(logit: Node, label: int) -> Node:
    """Binary logistic loss log(1 + exp(−y·s)) with y = ±1 from label ∈ {0, 1}."""
    if logit.shape != (1, 1):
        raise DimensionError(f"logistic_loss: expected a 1×1 logit, got {logit.shape}")
    if label not in (0, 1):
        raise ContractError(f"logistic_loss: label must be 0 or 1, got {label}")
    y = 1.0 if label == 1 else -1.0
    margin = y * logit.value
    loss = np.logaddexp(0, -margin)

    def backward(grad: Tensor) -> None:
        # d/ds log(1 + e^{-ys}) = -y * sigmoid(-ys)
        logit.accumulate(grad * (-y) * _sigmoid(-margin))

    return logit.tape.record(loss, (logit,), "logistic_loss", backward)


def _sigmoid(x: Tensor) -> Tensor:
    return np.where(x >= 0, 1 / (1 + np.exp(-np.abs(x))), np.exp(-np.abs(x)) / (1 + np.exp(-np.abs(x))))

"""Reverse-mode differentiation tape.

A ``Tape`` records every ``Node`` in creation order, which is already a
topological order of the graph. ``Tape.backward`` walks that list in reverse
and calls each node's backward rule once, accumulating into parent grads.

Tensors are plain ``numpy`` arrays in row-major layout; the tape fixes the
element precision (float32 at runtime, float64 for finite-difference
oracles).
"""

from typing import Callable, Dict, Hashable, List, Optional, Sequence, Tuple, Union

import numpy as np
from numpy.typing import ArrayLike, NDArray

from gradsam_core.errors import ContractError, MissingGradientError, NonFiniteError

Tensor = NDArray[np.floating]
BackwardRule = Callable[[Tensor], None]

PRECISIONS = {
    "float32": np.float32,
    "float64": np.float64,
}


def resolve_dtype(precision: Union[str, type, np.dtype]) -> np.dtype:
    """Map a precision flag ("float32" / "float64") to a numpy dtype."""
    if isinstance(precision, str):
        if precision not in PRECISIONS:
            raise ContractError(
                f"Unknown precision '{precision}'. Must be one of: {', '.join(PRECISIONS)}"
            )
        return np.dtype(PRECISIONS[precision])
    return np.dtype(precision)


class Node:
    """One value in the differentiation graph.

    ``grad`` stays ``None`` until backward reaches the node; afterwards it has
    the same shape as ``value``.
    """

    __slots__ = ("value", "grad", "parents", "rule", "requires_grad", "tape", "_backward")

    def __init__(
        self,
        tape: "Tape",
        value: Tensor,
        parents: Tuple["Node", ...] = (),
        rule: str = "leaf",
        requires_grad: bool = False,
        backward: Optional[BackwardRule] = None,
    ):
        self.tape = tape
        self.value = value
        self.grad: Optional[Tensor] = None
        self.parents = parents
        self.rule = rule
        self.requires_grad = requires_grad
        self._backward = backward

    @property
    def shape(self) -> Tuple[int, ...]:
        return self.value.shape

    def accumulate(self, grad: Tensor) -> None:
        """Add ``grad`` into this node's gradient (lazily allocated)."""
        if not self.requires_grad:
            return
        if grad.shape != self.value.shape:
            raise ContractError(
                f"Gradient shape {grad.shape} does not match value shape {self.value.shape} "
                f"for node '{self.rule}'"
            )
        if self.grad is None:
            self.grad = np.array(grad, dtype=self.value.dtype, copy=True)
        else:
            self.grad += grad

    def __repr__(self) -> str:
        return f"Node(rule={self.rule!r}, shape={self.shape}, requires_grad={self.requires_grad})"


class Tape:
    """Single-threaded recorder for one forward/backward pass.

    Distinct tapes share nothing and may run on distinct threads.
    """

    def __init__(self, precision: Union[str, type, np.dtype] = "float32"):
        self.dtype = resolve_dtype(precision)
        self.nodes: List[Node] = []
        self.taps: Dict[Hashable, Node] = {}
        self.backward_calls = 0

    def leaf(self, value: ArrayLike, requires_grad: bool = False) -> Node:
        """Create an input node holding a copy-free view of ``value`` at tape precision."""
        array = np.asarray(value, dtype=self.dtype)
        if array.ndim != 2:
            raise ContractError(f"Tensors must be 2-D, got shape {array.shape}")
        _check_finite(array, "leaf")
        node = Node(self, array, rule="leaf", requires_grad=requires_grad)
        self.nodes.append(node)
        return node

    def record(
        self,
        value: Tensor,
        parents: Sequence[Node],
        rule: str,
        backward: BackwardRule,
    ) -> Node:
        """Append the result of an op; the op's inputs must live on this tape."""
        for parent in parents:
            if parent.tape is not self:
                raise ContractError(f"Operand of '{rule}' belongs to a different tape")
        _check_finite(value, rule)
        requires_grad = any(p.requires_grad for p in parents)
        node = Node(
            self,
            value.astype(self.dtype, copy=False),
            parents=tuple(parents),
            rule=rule,
            requires_grad=requires_grad,
            backward=backward if requires_grad else None,
        )
        self.nodes.append(node)
        return node

    def tap(self, node: Node, tap_id: Hashable) -> Node:
        """Register ``node`` under ``tap_id`` so its gradient can be fetched later."""
        if node.tape is not self:
            raise ContractError(f"Tap '{tap_id}' refers to a node on a different tape")
        self.taps[tap_id] = node
        return node

    def tapped(self, tap_id: Hashable) -> Node:
        try:
            return self.taps[tap_id]
        except KeyError:
            raise ContractError(f"No tap registered under '{tap_id}'") from None

    def tap_grad(self, tap_id: Hashable) -> Tensor:
        """Gradient of the last backward root with respect to a tapped node."""
        node = self.tapped(tap_id)
        if node.grad is None:
            raise MissingGradientError(
                f"Tap '{tap_id}' has no gradient; run backward from a root that depends on it"
            )
        return node.grad

    def zero_grad(self) -> None:
        for node in self.nodes:
            node.grad = None

    def backward(self, root: Node) -> None:
        """Populate ``grad`` on every differentiable node reachable from ``root``."""
        if root.tape is not self:
            raise ContractError("Backward root belongs to a different tape")
        if root.value.size != 1:
            raise ContractError(
                f"Backward root must be a scalar, got shape {root.value.shape}"
            )
        if not root.requires_grad:
            raise ContractError("Backward root does not depend on any differentiable input")

        self.zero_grad()
        self.backward_calls += 1
        root.grad = np.ones_like(root.value)

        # Creation order is topological, so the reverse visits consumers first.
        for node in reversed(self.nodes):
            if node.grad is None or node._backward is None:
                continue
            node._backward(node.grad)


def _check_finite(value: Tensor, rule: str) -> None:
    if not np.all(np.isfinite(value)):
        raise NonFiniteError(f"Operation '{rule}' produced non-finite values")

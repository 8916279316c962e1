"""Reverse-mode differentiation over dense 2-D tensors."""

from gradsam_core.autodiff.tape import Node, Tape, Tensor, resolve_dtype
from gradsam_core.autodiff import ops

__all__ = ["Node", "Tape", "Tensor", "resolve_dtype", "ops"]

"""Per-head combined maps H^{lm} built from attention A and its gradient G."""

from dataclasses import dataclass
from typing import Optional

import numpy as np
from numpy.typing import ArrayLike

from gradsam_core.errors import ContractError, DimensionError
from gradsam_core.models.config import MethodKind


def combine_maps(
    attention: ArrayLike, gradients: Optional[ArrayLike], method: MethodKind
) -> np.ndarray:
    """Elementwise map formula of one attention-map method.

    ``attention`` and ``gradients`` have any matching shape, usually
    (L, M, N, N) or a single N×N head.

    ======================  ======================
    att                     A
    att-grad                G
    att-grad-r              ReLU(G)
    att-x-att-grad          A ∘ G
    grad-sam                A ∘ ReLU(G)
    ======================  ======================
    """
    method = MethodKind(method)
    A = np.asarray(attention)
    if method == MethodKind.ATT:
        return A.copy()
    if not method.uses_attention_maps:
        raise ContractError(f"Method '{method.value}' does not build attention maps")
    if gradients is None:
        raise ContractError(f"Method '{method.value}' needs attention gradients")
    G = np.asarray(gradients)
    if G.shape != A.shape:
        raise DimensionError(f"Gradient shape {G.shape} does not match attention {A.shape}")

    if method == MethodKind.ATT_GRAD:
        return G.copy()
    if method == MethodKind.ATT_GRAD_R:
        return np.maximum(G, 0)
    if method == MethodKind.ATT_X_ATT_GRAD:
        return A * G
    return A * np.maximum(G, 0)


@dataclass
class SamMaps:
    """Captured attention, its gradients (when needed) and the combined maps.

    Every array has shape (L, M, N, N).
    """

    method: MethodKind
    attention: np.ndarray
    gradients: Optional[np.ndarray]
    combined: np.ndarray

    @property
    def layers(self) -> int:
        return self.combined.shape[0]

    @property
    def heads(self) -> int:
        return self.combined.shape[1]

    @property
    def length(self) -> int:
        return self.combined.shape[-1]

    def head(self, layer: int, head: int) -> np.ndarray:
        return self.combined[layer, head]

    @classmethod
    def build(
        cls, attention: ArrayLike, gradients: Optional[ArrayLike], method: MethodKind
    ) -> "SamMaps":
        A = np.asarray(attention)
        if A.ndim != 4 or A.shape[-1] != A.shape[-2]:
            raise DimensionError(f"Attention stack must be (L, M, N, N), got {A.shape}")
        G = None if gradients is None else np.asarray(gradients)
        return cls(MethodKind(method), A, G, combine_maps(A, G, method))

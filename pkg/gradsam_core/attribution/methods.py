"""Token importance for every ranking method.

Importance of token i under an attention-map method is

    r_i = 1/(L·M·N) · Σ_l Σ_m Σ_j H^{lm}_{ij}

i.e. the mean of row i of every combined map. Entry (i, j) of A^{lm} couples
token i's query with token j's key, so row i is the attention x_i pays out,
weighted by gradient. Read as "attention x_i receives from x_j" the same sum
runs over column i instead; ``ImportanceAxis.COLUMN`` selects that reading.

Special positions ([CLS], [SEP], [PAD]) are set to −∞ after aggregation.
"""

from typing import Callable, Dict, List, Optional, Sequence

import numpy as np

from gradsam_core.attribution.maps import SamMaps
from gradsam_core.encoder.model import ForwardTrace
from gradsam_core.errors import ContractError
from gradsam_core.models.config import GradientVariant, ImportanceAxis, MethodKind
from gradsam_core.models.records import TokenSequence
from gradsam_core.models.results import AttributionResult, TokenScore

NEG_INF = float("-inf")


def compute_maps(trace: ForwardTrace, method: MethodKind) -> SamMaps:
    """Combined maps of an attention-map method for a finished trace.

    Raises:
        ContractError: If the method does not use attention maps.
        MissingGradientError: If the method needs gradients and backward has
            not run from the target score.
    """
    method = MethodKind(method)
    if not method.uses_attention_maps:
        raise ContractError(f"Method '{method.value}' does not build attention maps")
    gradients = trace.attention_grad_array() if method.needs_gradients else None
    return SamMaps.build(trace.attention_array(), gradients, method)


def importance_vector(
    combined: np.ndarray,
    special: Sequence[bool],
    axis: ImportanceAxis = ImportanceAxis.ROW,
) -> np.ndarray:
    """Normalized row (or column) sums of an (L, M, N, N) map stack, specials at −∞."""
    L, M, N, _ = combined.shape
    if len(special) != N:
        raise ContractError(f"Special flags cover {len(special)} positions, maps cover {N}")
    reduce_over = (0, 1, 3) if ImportanceAxis(axis) == ImportanceAxis.ROW else (0, 1, 2)
    r = combined.astype(np.float64).sum(axis=reduce_over) / (L * M * N)
    r[np.asarray(special, dtype=bool)] = NEG_INF
    return r


def rank_positions(scores: np.ndarray, special: Sequence[bool]) -> List[int]:
    """Real positions by descending score; equal scores keep ascending index order."""
    real = np.flatnonzero(~np.asarray(special, dtype=bool))
    order = np.argsort(-scores[real], kind="stable")
    return [int(i) for i in real[order]]


def build_result(
    method: MethodKind,
    seq: TokenSequence,
    scores: np.ndarray,
    class_id: Optional[int] = None,
) -> AttributionResult:
    scores = np.asarray(scores, dtype=np.float64).copy()
    scores[np.asarray(seq.special, dtype=bool)] = NEG_INF
    return AttributionResult(
        method=MethodKind(method).value,
        class_id=class_id,
        tokens=[
            TokenScore(text=token, index=i, score=float(score))
            for i, (token, score) in enumerate(zip(seq.tokens, scores))
        ],
        ranking=rank_positions(scores, seq.special),
    )


def token_importance(
    maps: SamMaps,
    seq: TokenSequence,
    class_id: Optional[int] = None,
    axis: ImportanceAxis = ImportanceAxis.ROW,
) -> AttributionResult:
    return build_result(maps.method, seq, importance_vector(maps.combined, seq.special, axis), class_id)


def input_gradient_importance(
    trace: ForwardTrace,
    variant: GradientVariant = GradientVariant.NORM,
    class_id: Optional[int] = None,
) -> AttributionResult:
    """Per-token reduction of ∂s_x/∂e_i, e_i the summed input embedding of token i."""
    grad = trace.embedding_grad().astype(np.float64)
    if GradientVariant(variant) == GradientVariant.NORM:
        scores = np.linalg.norm(grad, axis=1)
    else:
        scores = np.sum(grad * trace.embeddings.value, axis=1)
    return build_result(MethodKind.GRADIENT, trace.sequence, scores, class_id)


def cls_attention_importance(
    trace: ForwardTrace, class_id: Optional[int] = None
) -> AttributionResult:
    """Final-layer [CLS]-row attention, averaged over heads."""
    last = [head.value[0] for head in trace.attention[-1]]
    scores = np.mean(np.stack(last).astype(np.float64), axis=0)
    return build_result(MethodKind.CLS_ATT, trace.sequence, scores, class_id)


def attribute(
    trace: ForwardTrace,
    method: MethodKind,
    class_id: Optional[int] = None,
    variant: GradientVariant = GradientVariant.NORM,
    axis: ImportanceAxis = ImportanceAxis.ROW,
) -> AttributionResult:
    """Dispatch one method over a finished trace (backward already run if needed)."""
    method = MethodKind(method)
    handler = METHODS[method]
    return handler(trace, method, class_id, variant, axis)


def _gradient(trace, method, class_id, variant, axis):
    return input_gradient_importance(trace, variant, class_id)


def _cls_att(trace, method, class_id, variant, axis):
    return cls_attention_importance(trace, class_id)


def _attention_maps(trace, method, class_id, variant, axis):
    return token_importance(compute_maps(trace, method), trace.sequence, class_id, axis)


METHODS: Dict[MethodKind, Callable[..., AttributionResult]] = {
    MethodKind.GRADIENT: _gradient,
    MethodKind.CLS_ATT: _cls_att,
    MethodKind.ATT: _attention_maps,
    MethodKind.ATT_GRAD: _attention_maps,
    MethodKind.ATT_GRAD_R: _attention_maps,
    MethodKind.ATT_X_ATT_GRAD: _attention_maps,
    MethodKind.GRAD_SAM: _attention_maps,
}

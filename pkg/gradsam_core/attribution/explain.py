"""End-to-end explanation of one sentence."""

import logging
from typing import List, Optional, Union

from rapidfuzz import fuzz

from gradsam_core.attribution.methods import attribute
from gradsam_core.autodiff.tape import Tape
from gradsam_core.encoder.model import forward, predict, predict_from_logits, target_score
from gradsam_core.encoder.tokenizer import Vocab, apply_mask, select_top_k_count
from gradsam_core.encoder.weights import EncoderWeights
from gradsam_core.errors import ConfigError, ContractError
from gradsam_core.models.config import (
    GradientVariant,
    ImportanceAxis,
    MaskPolicy,
    MethodKind,
    ModelConfig,
)
from gradsam_core.models.records import TokenSequence
from gradsam_core.models.results import AttributionResult

logger = logging.getLogger(__name__)

ALL_METHODS: List[MethodKind] = list(MethodKind)


def suggest_method(name: str, cutoff: float = 60.0) -> Optional[str]:
    """Closest known method spelling, or None if nothing is similar enough."""
    best, best_score = None, cutoff
    for method in MethodKind:
        score = fuzz.ratio(name.lower(), method.value)
        if score >= best_score:
            best, best_score = method.value, score
    return best


def parse_method(name: Union[str, MethodKind]) -> MethodKind:
    """Method from its CLI spelling.

    Raises:
        ConfigError: For unknown names, with a suggestion when one is close.
    """
    if isinstance(name, MethodKind):
        return name
    try:
        return MethodKind(name.strip().lower())
    except ValueError:
        hint = suggest_method(name)
        message = f"Unknown method '{name}'. Must be one of: {', '.join(m.value for m in MethodKind)}"
        if hint:
            message += f" (did you mean '{hint}'?)"
        raise ConfigError(message) from None


def parse_methods(names: Union[str, List[str]]) -> List[MethodKind]:
    """Comma-separated or listed method names; ``all`` expands to every method."""
    if isinstance(names, str):
        names = [n for n in names.split(",") if n.strip()]
    if any(str(n).strip().lower() == "all" for n in names):
        return list(ALL_METHODS)
    methods: List[MethodKind] = []
    for name in names:
        method = parse_method(name)
        if method not in methods:
            methods.append(method)
    if not methods:
        raise ConfigError("No methods given")
    return methods


def explain(
    seq: TokenSequence,
    weights: EncoderWeights,
    method: Union[str, MethodKind],
    class_id: Optional[int] = None,
    *,
    k: Optional[float] = None,
    vocab: Optional[Vocab] = None,
    policy: MaskPolicy = MaskPolicy.REPLACE,
    variant: GradientVariant = GradientVariant.NORM,
    axis: ImportanceAxis = ImportanceAxis.ROW,
    cfg: Optional[ModelConfig] = None,
    tape: Optional[Tape] = None,
) -> AttributionResult:
    """Rank the tokens of ``seq`` with one method.

    Gradient-based methods differentiate the single logit of a binary model,
    or the logit of ``class_id`` (default: the predicted class) of a
    multiclass one. Pure-attention methods run no backward pass.

    With ``k`` the result also carries the top ceil(k · real_count) positions
    and the model's prediction when only those tokens are kept.

    Raises:
        ConfigError: Unknown method name.
        ContractError: ``class_id`` given for a binary model, or ``k`` without ``vocab``.
    """
    method = parse_method(method)
    if k is not None and vocab is None:
        raise ContractError("Keep-top-k prediction needs the vocabulary for masking")

    trace = forward(seq, weights, cfg, track_gradients=method.needs_gradients, tape=tape)
    prediction = predict_from_logits(trace.logits_array())
    if trace.config.n == 1:
        if class_id is not None:
            raise ContractError("Binary models explain their single logit; class_id must be omitted")
    elif class_id is None:
        class_id = prediction

    if method.needs_gradients:
        trace.tape.backward(target_score(trace, class_id))

    result = attribute(trace, method, class_id, variant, axis)
    update = {"prediction": prediction}
    if k is not None:
        top = result.top(select_top_k_count(k, seq.real_count))
        masked = apply_mask(seq, top, vocab, policy)
        update.update(k=k, top_k=top, masked_prediction=predict(masked, weights, cfg))
    logger.debug(f"{method.value}: top token position {result.ranking[:1]}")
    return result.model_copy(update=update)

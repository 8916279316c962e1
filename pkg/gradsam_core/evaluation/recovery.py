"""How well a ranking recovers the gold rationale of synthetic sentences."""

from typing import Optional, Sequence

from gradsam_core.encoder.examples import EncodedExample
from gradsam_core.errors import ContractError
from gradsam_core.models.results import AttributionResult, RecoveryStats


def recovery_from_rankings(
    method: str,
    rankings: Sequence[Sequence[int]],
    predictions: Sequence[int],
    examples: Sequence[EncodedExample],
    label: Optional[int] = None,
) -> RecoveryStats:
    """Top-1 hit rate and mean reciprocal rank of the best-ranked gold token.

    Only correctly classified sentences with a gold rationale count; ``label``
    further restricts them to one gold class.

    Raises:
        ContractError: If no sentence carries a gold rationale.
    """
    if not (len(rankings) == len(predictions) == len(examples)):
        raise ContractError("Rankings, predictions and examples must align")
    if not any(ex.gold_positions for ex in examples):
        raise ContractError("Dataset carries no gold rationales")

    hits = 0
    reciprocal = 0.0
    evaluated = 0
    for ranking, prediction, example in zip(rankings, predictions, examples):
        gold = set(example.gold_positions)
        if not gold or prediction != example.label:
            continue
        if label is not None and example.label != label:
            continue
        evaluated += 1
        ranks = [r for r, position in enumerate(ranking, start=1) if position in gold]
        if ranks:
            hits += ranks[0] == 1
            reciprocal += 1.0 / ranks[0]

    return RecoveryStats(
        method=method,
        label=label,
        evaluated=evaluated,
        top1_hit_rate=hits / evaluated if evaluated else 0.0,
        mean_reciprocal_rank=reciprocal / evaluated if evaluated else 0.0,
    )


def rationale_recovery(
    results: Sequence[AttributionResult],
    examples: Sequence[EncodedExample],
    label: Optional[int] = None,
) -> RecoveryStats:
    """Recovery statistics from explanations aligned with ``examples``."""
    if not results:
        raise ContractError("No attribution results given")
    if any(r.prediction is None for r in results):
        raise ContractError("Attribution results must record the model prediction")
    return recovery_from_rankings(
        results[0].method,
        [r.ranking for r in results],
        [r.prediction for r in results],
        examples,
        label,
    )

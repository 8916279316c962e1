"""Faithfulness protocols and metrics."""

from gradsam_core.evaluation.metrics import METRICS, accuracy, get_metric, macro_f1, per_class_f1
from gradsam_core.evaluation.masking import mask_by_ranking, select_positions
from gradsam_core.evaluation.rankers import MethodRanker, OracleRanker, RandomRanker, Ranker
from gradsam_core.evaluation.recovery import rationale_recovery, recovery_from_rankings
from gradsam_core.evaluation.protocols import (
    aopc_eval,
    compute_rankings,
    evaluate,
    full_predictions,
    masked_eval,
    recompute_row,
    score_masked,
)

__all__ = [
    "METRICS",
    "accuracy",
    "get_metric",
    "macro_f1",
    "per_class_f1",
    "mask_by_ranking",
    "select_positions",
    "MethodRanker",
    "OracleRanker",
    "RandomRanker",
    "Ranker",
    "rationale_recovery",
    "recovery_from_rankings",
    "aopc_eval",
    "compute_rankings",
    "evaluate",
    "full_predictions",
    "masked_eval",
    "recompute_row",
    "score_masked",
]

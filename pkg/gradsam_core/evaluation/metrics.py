"""Classification metrics over label lists."""

from typing import Callable, Dict, List, Optional, Sequence

import numpy as np
from sklearn.metrics import confusion_matrix

from gradsam_core.errors import ConfigError, ContractError


def _check(preds: Sequence[int], golds: Sequence[int]) -> None:
    if len(preds) != len(golds):
        raise ContractError(f"{len(preds)} predictions for {len(golds)} gold labels")
    if not golds:
        raise ContractError("Cannot score an empty prediction list")


def per_class_f1(
    preds: Sequence[int], golds: Sequence[int], labels: Optional[Sequence[int]] = None
) -> Dict[int, float]:
    """F1 of every label; a label absent from both lists scores 1."""
    _check(preds, golds)
    if labels is None:
        labels = sorted(set(preds) | set(golds))
    cm = confusion_matrix(np.asarray(golds), np.asarray(preds), labels=list(labels))
    tp = np.diag(cm).astype(np.float64)
    fp = cm.sum(axis=0) - tp
    fn = cm.sum(axis=1) - tp
    denom = 2 * tp + fp + fn
    f1 = np.divide(2 * tp, denom, out=np.ones_like(tp), where=denom > 0)
    return {int(label): float(score) for label, score in zip(labels, f1)}


def macro_f1(
    preds: Sequence[int], golds: Sequence[int], labels: Optional[Sequence[int]] = None
) -> float:
    """Unweighted mean of per-class F1.

    Example:
        >>> macro_f1([0, 0, 0, 0], [0, 0, 1, 1])
        0.3333333333333333
    """
    return float(np.mean(list(per_class_f1(preds, golds, labels).values())))


def accuracy(
    preds: Sequence[int], golds: Sequence[int], labels: Optional[Sequence[int]] = None
) -> float:
    _check(preds, golds)
    return float(np.mean(np.asarray(preds) == np.asarray(golds)))


METRICS: Dict[str, Callable[..., float]] = {
    "macro_f1": macro_f1,
    "accuracy": accuracy,
}


def get_metric(name: str) -> Callable[..., float]:
    try:
        return METRICS[name]
    except KeyError:
        raise ConfigError(
            f"Unknown metric '{name}'. Must be one of: {', '.join(METRICS)}"
        ) from None


def metric_names() -> List[str]:
    return list(METRICS)

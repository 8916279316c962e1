"""Synthetic corpora and finetuning."""

from gradsam_core.training.synthetic import generate_corpus, label_rule, validate_task_vocab
from gradsam_core.training.optim import SGD, Adam, make_optimizer
from gradsam_core.training.trainer import (
    EpochStats,
    TrainResult,
    accuracy_on,
    loss_and_gradients,
    train,
)

__all__ = [
    "generate_corpus",
    "label_rule",
    "validate_task_vocab",
    "SGD",
    "Adam",
    "make_optimizer",
    "EpochStats",
    "TrainResult",
    "accuracy_on",
    "loss_and_gradients",
    "train",
]

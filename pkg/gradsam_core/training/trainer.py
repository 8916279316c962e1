"""Minibatch finetuning of the encoder classifier on the differentiation tape."""

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np
from tqdm import tqdm

from gradsam_core.autodiff import ops
from gradsam_core.autodiff.tape import Node, Tape
from gradsam_core.encoder.examples import EncodedExample, encode_dataset
from gradsam_core.encoder.model import forward, predict_from_logits
from gradsam_core.encoder.tokenizer import Tokenizer
from gradsam_core.encoder.weights import EncoderWeights
from gradsam_core.errors import ConfigError, NonFiniteError, TrainingError
from gradsam_core.models.config import LossKind, TrainConfig
from gradsam_core.models.records import DatasetRecord
from gradsam_core.training.optim import clip_by_global_norm, make_optimizer

logger = logging.getLogger(__name__)


@dataclass
class EpochStats:
    epoch: int
    loss: float
    train_accuracy: float
    validation_accuracy: Optional[float]
    grad_norm: float


@dataclass
class TrainResult:
    """Final weights plus per-epoch history (empty for zero epochs)."""

    weights: EncoderWeights
    history: List[EpochStats] = field(default_factory=list)

    @property
    def final_train_accuracy(self) -> Optional[float]:
        return self.history[-1].train_accuracy if self.history else None

    @property
    def final_validation_accuracy(self) -> Optional[float]:
        return self.history[-1].validation_accuracy if self.history else None


def example_loss(logits: Node, label: int, loss: LossKind) -> Node:
    if loss == LossKind.LOGISTIC:
        return ops.logistic_loss(logits, label)
    return ops.softmax_cross_entropy(logits, label)


def _batch_loss(
    weights: EncoderWeights,
    arrays: Mapping[str, np.ndarray],
    examples: Sequence[EncodedExample],
    loss: LossKind,
) -> Tuple[float, Dict[str, np.ndarray], List[int]]:
    tape = Tape(weights.config.precision.value)
    leaves = {name: tape.leaf(arrays[name], requires_grad=True) for name in weights}
    total = None
    predictions = []
    for example in examples:
        trace = forward(
            example.sequence, weights, trainable=True, tape=tape, parameters=leaves
        )
        predictions.append(predict_from_logits(trace.logits.value))
        term = example_loss(trace.logits, example.label, loss)
        total = term if total is None else ops.add(total, term)
    mean = ops.scalar_scale(total, 1.0 / len(examples))
    tape.backward(mean)
    grads = {
        name: leaf.grad if leaf.grad is not None else np.zeros_like(leaf.value)
        for name, leaf in leaves.items()
    }
    return float(mean.value[0, 0]), grads, predictions


def loss_and_gradients(
    weights: EncoderWeights,
    examples: Sequence[EncodedExample],
    loss: Optional[LossKind] = None,
) -> Tuple[float, Dict[str, np.ndarray]]:
    """Mean loss over ``examples`` and its gradient for every weight tensor."""
    if not examples:
        raise TrainingError("cannot compute a loss over zero examples")
    if loss is None:
        loss = TrainConfig().resolve_loss(weights.config.n)
    value, grads, _ = _batch_loss(weights, weights.tensors, examples, loss)
    return value, grads


def accuracy_on(weights: EncoderWeights, examples: Sequence[EncodedExample]) -> Optional[float]:
    if not examples:
        return None
    hits = sum(
        predict_from_logits(
            forward(ex.sequence, weights, track_gradients=False).logits_array()
        )
        == ex.label
        for ex in examples
    )
    return hits / len(examples)


def train(
    weights: EncoderWeights,
    records: Sequence[DatasetRecord],
    tokenizer: Tokenizer,
    cfg: TrainConfig,
    progress: bool = False,
) -> TrainResult:
    """Finetune ``weights`` on the train split of ``records``.

    Records whose split is ``validation`` are scored after every epoch. When no
    record is marked ``train``, every record is trained on. The same seed
    reproduces the same weights bit for bit.

    Raises:
        TrainingError: If the dataset is empty or the loss stops being finite
            (the message carries the 1-based epoch).
        ConfigError: If the loss kind does not fit the model's output width.
    """
    config = weights.config
    if not records:
        raise TrainingError("dataset is empty")
    try:
        loss_kind = cfg.resolve_loss(config.n)
    except ValueError as e:
        raise ConfigError(str(e)) from e
    for record in records:
        if record.label not in config.labels:
            raise ConfigError(
                f"Record '{record.id}' has label {record.label}; model predicts {config.labels}"
            )

    train_set = encode_dataset(records, tokenizer, config.N, split="train")
    if not train_set:
        logger.warning("No records marked 'train'; training on the whole dataset")
        train_set = encode_dataset(records, tokenizer, config.N)
    validation_set = encode_dataset(records, tokenizer, config.N, split="validation")

    if cfg.epochs == 0:
        return TrainResult(weights=weights)

    rng = np.random.default_rng(cfg.seed)
    params = {name: np.array(weights[name], copy=True) for name in weights}
    optimizer = make_optimizer(cfg, params)
    history: List[EpochStats] = []

    logger.info(
        f"Training on {len(train_set)} sentences for {cfg.epochs} epochs "
        f"({cfg.optimizer.value}, lr={cfg.learning_rate}, batch={cfg.batch_size})"
    )
    epochs = tqdm(range(1, cfg.epochs + 1), desc="train", unit="epoch", disable=not progress)
    for epoch in epochs:
        order = rng.permutation(len(train_set))
        losses, norms = [], []
        hits = 0
        for start in range(0, len(order), cfg.batch_size):
            batch = [train_set[i] for i in order[start : start + cfg.batch_size]]
            try:
                value, grads, predictions = _batch_loss(weights, params, batch, loss_kind)
            except NonFiniteError as e:
                raise TrainingError(str(e), epoch=epoch) from e
            if not np.isfinite(value):
                raise TrainingError(f"loss became {value}", epoch=epoch)
            norms.append(clip_by_global_norm(grads, cfg.max_grad_norm))
            logger.debug(f"epoch {epoch} batch {start // cfg.batch_size}: loss={value:.4f} grad_norm={norms[-1]:.4f}")
            optimizer.step(grads)
            losses.append(value * len(batch))
            hits += sum(p == ex.label for p, ex in zip(predictions, batch))

        for name, param in params.items():
            if not np.all(np.isfinite(param)):
                raise TrainingError(f"parameter '{name}' diverged", epoch=epoch)
        current = EncoderWeights.from_arrays(config, params)
        stats = EpochStats(
            epoch=epoch,
            loss=float(sum(losses) / len(train_set)),
            train_accuracy=hits / len(train_set),
            validation_accuracy=accuracy_on(current, validation_set),
            grad_norm=float(np.mean(norms)),
        )
        history.append(stats)
        val = "n/a" if stats.validation_accuracy is None else f"{stats.validation_accuracy:.3f}"
        logger.info(
            f"Epoch {epoch}/{cfg.epochs}: loss={stats.loss:.4f} "
            f"train_acc={stats.train_accuracy:.3f} val_acc={val}"
        )

    return TrainResult(weights=EncoderWeights.from_arrays(config, params), history=history)

"""Planted-trigger corpora with an objective gold rationale.

Every sentence is a shuffle of distractor words around exactly one trigger
word; binary tasks may also plant a negation word that flips the label.
The label is a pure function of the word multiset (see ``label_rule``).
"""

import logging
from typing import Iterable, List, Optional

import numpy as np

from gradsam_core.encoder.tokenizer import Tokenizer
from gradsam_core.errors import ConfigError
from gradsam_core.models.config import SyntheticTaskSpec
from gradsam_core.models.records import DatasetRecord

logger = logging.getLogger(__name__)


def label_rule(words: Iterable[str], spec: SyntheticTaskSpec) -> int:
    """Recompute a sentence's label from its words.

    Raises:
        ValueError: If the sentence does not hold exactly one trigger.
    """
    words = list(words)
    classes = [c for c in (spec.trigger_class(w) for w in words) if c is not None]
    if len(classes) != 1:
        raise ValueError(f"expected exactly one trigger, found {len(classes)}")
    label = classes[0]
    if spec.negation_token is not None and spec.negation_token in words:
        label = 1 - label
    return label


def validate_task_vocab(spec: SyntheticTaskSpec, tokenizer: Tokenizer) -> None:
    """Every planted or filler word must be one whole vocabulary token.

    Raises:
        ConfigError: Naming the first word that would not survive tokenization.
    """
    groups = [("trigger", t) for tokens in spec.triggers.values() for t in tokens]
    groups += [("distractor", t) for t in spec.distractors]
    if spec.negation_token is not None:
        groups.append(("negation token", spec.negation_token))
    for kind, word in groups:
        if tokenizer.tokenize(word) != [word]:
            raise ConfigError(f"Task '{spec.name}': {kind} '{word}' is not a vocabulary token")


def _split_names(spec: SyntheticTaskSpec, count: int) -> List[str]:
    """Contiguous split assignment; rounding remainder goes to the last split."""
    names = []
    items = list(spec.split_fractions.items())
    for i, (name, fraction) in enumerate(items):
        if i == len(items) - 1:
            size = count - len(names)
        else:
            size = int(round(fraction * count))
        names.extend([name] * max(0, min(size, count - len(names))))
    return names


def generate_corpus(
    spec: SyntheticTaskSpec,
    count: int,
    seed: int = 0,
    tokenizer: Optional[Tokenizer] = None,
) -> List[DatasetRecord]:
    """Sample ``count`` labelled sentences from ``spec``.

    Labels are drawn from the class prior first; with negation the trigger
    comes from the opposite class, so label frequencies follow the prior
    either way. Gold rationales are the word indices of the trigger and of
    the negation word when present.

    Args:
        spec: Task description.
        count: Number of sentences.
        seed: Seed for every random draw.
        tokenizer: When given, every task word is checked against its vocabulary.

    Raises:
        ConfigError: If a task word is not in the vocabulary or count is negative.
    """
    if count < 0:
        raise ConfigError(f"count must be nonnegative, got {count}")
    if tokenizer is not None:
        validate_task_vocab(spec, tokenizer)

    rng = np.random.default_rng(seed)
    prior = np.asarray(spec.prior, dtype=np.float64)
    weights = None
    if spec.distractor_weights is not None:
        weights = np.asarray(spec.distractor_weights, dtype=np.float64)
        weights = weights / weights.sum()

    splits = _split_names(spec, count)
    width = max(5, len(str(count)))
    records = []
    for i in range(count):
        label = int(rng.choice(spec.num_classes, p=prior))
        negate = spec.negation_token is not None and rng.random() < spec.negation_rate
        trigger_class = 1 - label if negate else label
        options = spec.triggers[trigger_class]
        trigger = options[int(rng.integers(len(options)))]

        n_distractors = int(rng.integers(spec.min_distractors, spec.max_distractors + 1))
        words: List[str] = []
        if n_distractors:
            picks = rng.choice(len(spec.distractors), size=n_distractors, p=weights)
            words = [spec.distractors[j] for j in picks]
        trigger_at = int(rng.integers(len(words) + 1))
        words.insert(trigger_at, trigger)
        rationale = [trigger_at]
        if negate:
            # Negation goes somewhere before the trigger.
            negation_at = int(rng.integers(trigger_at + 1))
            words.insert(negation_at, spec.negation_token)
            rationale = [negation_at, trigger_at + 1]

        records.append(
            DatasetRecord(
                id=f"{spec.name}-{i:0{width}d}",
                text=" ".join(words),
                label=label,
                rationale=rationale,
                split=splits[i],
            )
        )

    logger.info(f"Generated {count} '{spec.name}' sentences (seed {seed})")
    return records

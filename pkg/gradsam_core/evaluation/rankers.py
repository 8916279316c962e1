"""Token rankers used by the masking protocols.

A ranker maps an encoded example to its real-token positions, most
important first.
"""

import zlib
from typing import List, Optional

import numpy as np

from gradsam_core.attribution.explain import explain
from gradsam_core.encoder.examples import EncodedExample
from gradsam_core.encoder.weights import EncoderWeights
from gradsam_core.models.config import GradientVariant, ImportanceAxis, MethodKind


class Ranker:
    name: str = "ranker"
    seed: Optional[int] = None

    def rank(self, example: EncodedExample) -> List[int]:
        raise NotImplementedError

    def __repr__(self) -> str:
        return f"{type(self).__name__}(name={self.name!r})"


class MethodRanker(Ranker):
    """Ranking from an attribution method.

    Multiclass models explain the logit of the gold class.
    """

    def __init__(
        self,
        weights: EncoderWeights,
        method: MethodKind,
        variant: GradientVariant = GradientVariant.NORM,
        axis: ImportanceAxis = ImportanceAxis.ROW,
    ):
        self.weights = weights
        self.method = MethodKind(method)
        self.variant = variant
        self.axis = axis
        self.name = self.method.value

    def rank(self, example: EncodedExample) -> List[int]:
        class_id = example.label if self.weights.config.n > 1 else None
        result = explain(
            example.sequence,
            self.weights,
            self.method,
            class_id,
            variant=self.variant,
            axis=self.axis,
        )
        return result.ranking


class RandomRanker(Ranker):
    """Uniform random permutation, reproducible per (seed, record id)."""

    name = "random"

    def __init__(self, seed: int):
        self.seed = seed

    def rank(self, example: EncodedExample) -> List[int]:
        rng = np.random.default_rng([self.seed, zlib.crc32(example.id.encode("utf-8"))])
        real = example.sequence.real_positions
        return [real[i] for i in rng.permutation(len(real))]


class OracleRanker(Ranker):
    """Gold rationale positions first, then the rest, each in index order."""

    name = "oracle"

    def rank(self, example: EncodedExample) -> List[int]:
        gold = set(example.gold_positions)
        real = example.sequence.real_positions
        return [i for i in real if i in gold] + [i for i in real if i not in gold]

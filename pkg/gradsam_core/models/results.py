"""Pydantic models for attribution results, evaluation reports and run manifests.

Scores of [CLS]/[SEP]/[PAD] positions are −∞ in memory and serialize as the
JSON string ``"-inf"``.
"""

import math
from typing import Any, Dict, List, Optional

import numpy as np
from pydantic import BaseModel, Field, computed_field, field_serializer, field_validator

from gradsam_core.models.config import MaskDirection, MaskPolicy

NEG_INF_TOKEN = "-inf"


def encode_score(value: float) -> Any:
    """JSON form of a score: finite floats as-is, −∞ as the string "-inf"."""
    if math.isinf(value) and value < 0:
        return NEG_INF_TOKEN
    return value


def decode_score(value: Any) -> float:
    if isinstance(value, str):
        if value == NEG_INF_TOKEN:
            return float("-inf")
        raise ValueError(f"unexpected score string {value!r}")
    return float(value)


class TokenScore(BaseModel):
    """Importance of one token position."""

    text: str
    index: int
    score: float

    @field_validator("score", mode="before")
    @classmethod
    def parse_score(cls, v: Any) -> float:
        return decode_score(v)

    @field_serializer("score")
    def serialize_score(self, v: float) -> Any:
        return encode_score(v)


class AttributionResult(BaseModel):
    """Per-token importance vector from one ranking method.

    ``ranking`` lists real-token positions by descending score, ties broken by
    lower index. Optional fields record the qualitative view: the model's
    prediction and its prediction after keeping only the top-k tokens.
    """

    method: str
    class_id: Optional[int] = None
    tokens: List[TokenScore]
    ranking: List[int]
    text: Optional[str] = None
    record_id: Optional[str] = None
    prediction: Optional[int] = None
    k: Optional[float] = None
    top_k: Optional[List[int]] = None
    masked_prediction: Optional[int] = None

    @property
    def scores(self) -> np.ndarray:
        return np.array([t.score for t in self.tokens], dtype=np.float64)

    def top(self, count: int) -> List[int]:
        return self.ranking[:count]


class SentenceRecord(BaseModel):
    """Per-sentence trace of one masking run."""

    record_id: str
    gold: int
    prediction_full: int
    prediction_masked: int
    kept: List[int]
    masked: List[int]


class EvalRow(BaseModel):
    """Aggregate for one (method, k, direction) cell."""

    method: str
    k: float
    direction: MaskDirection
    seed: Optional[int] = None
    metric_value: float = Field(description="Metric on masked inputs")
    full_metric: float = Field(description="Metric on unmasked inputs")
    records: List[SentenceRecord] = Field(default_factory=list)

    @computed_field
    @property
    def aopc(self) -> Optional[float]:
        """Metric drop after masking the top-k tokens (mask-top-k rows only)."""
        if self.direction != MaskDirection.MASK_TOP_K:
            return None
        return self.full_metric - self.metric_value


class RecoveryStats(BaseModel):
    """Gold-rationale recovery for one ranking method."""

    method: str
    label: Optional[int] = Field(default=None, description="Gold class the sentences were restricted to")
    evaluated: int = Field(description="Correctly classified sentences considered")
    top1_hit_rate: float
    mean_reciprocal_rank: float


class EvalReport(BaseModel):
    """Faithfulness report over one corpus and one model."""

    corpus_id: str
    model_hash: str
    split: str
    metric: str = "macro_f1"
    mask_policy: MaskPolicy = MaskPolicy.REPLACE
    labels: List[int]
    full_text_metric: float
    rows: List[EvalRow] = Field(default_factory=list)
    recovery: List[RecoveryStats] = Field(default_factory=list)

    def find(
        self, method: str, k: float, direction: MaskDirection
    ) -> List[EvalRow]:
        return [
            row
            for row in self.rows
            if row.method == method and math.isclose(row.k, k) and row.direction == direction
        ]

    def mean_metric(self, method: str, k: float, direction: MaskDirection) -> float:
        """Mean metric (or AOPC for mask-top-k) over every row of a cell, e.g. random seeds."""
        rows = self.find(method, k, direction)
        if not rows:
            raise KeyError(f"no rows for {method} at k={k} ({direction.value})")
        if direction == MaskDirection.MASK_TOP_K:
            return float(np.mean([row.aopc for row in rows]))
        return float(np.mean([row.metric_value for row in rows]))

    def recovery_for(self, method: str, label: Optional[int] = None) -> RecoveryStats:
        """Recovery of one method over all classes, or over one gold class."""
        for stats in self.recovery:
            if stats.method == method and stats.label == label:
                return stats
        raise KeyError(f"no recovery for {method} (label {label})")


class RunManifest(BaseModel):
    """Everything needed to reproduce and audit a run."""

    tool_version: str
    command: str
    parameters: Dict[str, Any] = Field(default_factory=dict)
    seeds: Dict[str, int] = Field(default_factory=dict)
    config_hashes: Dict[str, str] = Field(default_factory=dict)
    inputs: Dict[str, str] = Field(default_factory=dict, description="path -> sha256")
    outputs: Dict[str, str] = Field(default_factory=dict, description="path -> sha256")
    started_at: str
    finished_at: Optional[str] = None

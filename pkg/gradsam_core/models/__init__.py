"""Models package for Grad-SAM core."""

from gradsam_core.models.config import (
    Precision,
    TaskKind,
    ModelConfig,
    OptimizerKind,
    LossKind,
    TrainConfig,
    SyntheticTaskSpec,
    MaskPolicy,
    MaskDirection,
    MaskingSpec,
    ExperimentConfig,
    MethodKind,
    GradientVariant,
    ImportanceAxis,
)
from gradsam_core.models.records import (
    DatasetRecord,
    TokenSequence,
)
from gradsam_core.models.results import (
    TokenScore,
    AttributionResult,
    SentenceRecord,
    EvalRow,
    RecoveryStats,
    EvalReport,
    RunManifest,
)

__all__ = [
    # Config models
    "Precision",
    "TaskKind",
    "ModelConfig",
    "OptimizerKind",
    "LossKind",
    "TrainConfig",
    "SyntheticTaskSpec",
    "MaskPolicy",
    "MaskDirection",
    "MaskingSpec",
    "ExperimentConfig",
    "MethodKind",
    "GradientVariant",
    "ImportanceAxis",
    # Record models
    "DatasetRecord",
    "TokenSequence",
    # Result models
    "TokenScore",
    "AttributionResult",
    "SentenceRecord",
    "EvalRow",
    "RecoveryStats",
    "EvalReport",
    "RunManifest",
]

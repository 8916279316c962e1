"""Pydantic models for model, training, synthetic-task and masking configuration.

These are loaded from YAML files under ``data/`` (see ``utils.yaml_handler``)
and validated on construction.
"""

from enum import Enum
from typing import Dict, List, Optional

from pydantic import BaseModel, ConfigDict, Field, computed_field, field_validator, model_validator


class Precision(str, Enum):
    """Element precision of tensors."""
    FLOAT32 = "float32"
    FLOAT64 = "float64"


class TaskKind(str, Enum):
    """Classification task shape; binary uses a single logit."""
    BINARY = "binary"
    MULTICLASS = "multiclass"


class ModelConfig(BaseModel):
    """Encoder hyperparameters.

    ``N`` is the padded sequence length; ``n`` the output dimension (1 for
    binary tasks, the class count otherwise).
    """

    model_config = ConfigDict(frozen=True)

    L: int = Field(ge=1, description="Encoder layer count")
    M: int = Field(ge=1, description="Attention heads per layer")
    d: int = Field(ge=1, description="Hidden width")
    d_a: int = Field(ge=1, description="Per-head width")
    N: int = Field(ge=3, description="Sequence length including [CLS]/[SEP]")
    n: int = Field(ge=1, description="Output dimension")
    vocab_size: int = Field(ge=5, description="Vocabulary size N_T")
    max_positions: Optional[int] = Field(
        default=None, description="Position table size; defaults to N"
    )
    ffn_width: Optional[int] = Field(default=None, description="Feed-forward width; defaults to 4d")
    num_segments: int = Field(default=2, ge=1)
    layer_norm_eps: float = Field(default=1e-12, gt=0)
    precision: Precision = Precision.FLOAT32

    @model_validator(mode="after")
    def check_shapes(self) -> "ModelConfig":
        if self.M * self.d_a != self.d:
            raise ValueError(f"M·d_a must equal d, got {self.M}·{self.d_a} != {self.d}")
        if self.max_positions is not None and self.max_positions < self.N:
            raise ValueError(
                f"max_positions ({self.max_positions}) must be at least N ({self.N})"
            )
        return self

    @computed_field
    @property
    def positions(self) -> int:
        return self.max_positions if self.max_positions is not None else self.N

    @computed_field
    @property
    def hidden_ffn(self) -> int:
        return self.ffn_width if self.ffn_width is not None else 4 * self.d

    @property
    def task(self) -> TaskKind:
        return TaskKind.BINARY if self.n == 1 else TaskKind.MULTICLASS

    @property
    def labels(self) -> List[int]:
        """Class ids predicted by this model."""
        return [0, 1] if self.n == 1 else list(range(self.n))


class OptimizerKind(str, Enum):
    SGD = "sgd"
    ADAM = "adam"


class LossKind(str, Enum):
    CROSS_ENTROPY = "cross_entropy"
    LOGISTIC = "logistic"


class TrainConfig(BaseModel):
    """Finetuning hyperparameters for the desk-scale encoder."""

    epochs: int = Field(default=10, ge=0)
    batch_size: int = Field(default=16, ge=1)
    learning_rate: float = Field(default=1e-3, gt=0)
    optimizer: OptimizerKind = OptimizerKind.ADAM
    seed: int = 0
    loss: Optional[LossKind] = Field(
        default=None, description="Defaults to logistic for n == 1, cross-entropy otherwise"
    )
    beta1: float = Field(default=0.9, ge=0, lt=1)
    beta2: float = Field(default=0.999, ge=0, lt=1)
    adam_eps: float = Field(default=1e-8, gt=0)
    max_grad_norm: Optional[float] = Field(default=1.0, gt=0)

    def resolve_loss(self, n: int) -> LossKind:
        if self.loss is None:
            return LossKind.LOGISTIC if n == 1 else LossKind.CROSS_ENTROPY
        if self.loss == LossKind.LOGISTIC and n != 1:
            raise ValueError("logistic loss requires a single-logit (n == 1) model")
        if self.loss == LossKind.CROSS_ENTROPY and n == 1:
            raise ValueError("cross-entropy loss requires n > 1 outputs")
        return self.loss


class SyntheticTaskSpec(BaseModel):
    """Planted-trigger corpus description.

    The label of a sentence is the class of its planted trigger; when a
    negation token is present in a binary task the label flips.
    """

    name: str = "planted"
    num_classes: int = Field(default=2, ge=2)
    triggers: Dict[int, List[str]] = Field(description="Trigger tokens per class")
    distractors: List[str] = Field(description="Filler vocabulary")
    distractor_weights: Optional[List[float]] = None
    class_prior: Optional[List[float]] = None
    min_distractors: int = Field(default=3, ge=0)
    max_distractors: int = Field(default=8, ge=0)
    negation_token: Optional[str] = None
    negation_rate: float = Field(default=0.0, ge=0, le=1)
    split_fractions: Dict[str, float] = Field(
        default_factory=lambda: {"train": 0.8, "validation": 0.1, "test": 0.1}
    )

    @field_validator("split_fractions")
    @classmethod
    def validate_splits(cls, v: Dict[str, float]) -> Dict[str, float]:
        if any(f < 0 for f in v.values()) or abs(sum(v.values()) - 1.0) > 1e-9:
            raise ValueError(f"split fractions must be nonnegative and sum to 1, got {v}")
        return v

    @model_validator(mode="after")
    def check_consistency(self) -> "SyntheticTaskSpec":
        if sorted(self.triggers) != list(range(self.num_classes)):
            raise ValueError(
                f"triggers must cover classes 0..{self.num_classes - 1}, got {sorted(self.triggers)}"
            )
        if any(not tokens for tokens in self.triggers.values()):
            raise ValueError("every class needs at least one trigger token")
        if self.min_distractors > self.max_distractors:
            raise ValueError("min_distractors exceeds max_distractors")
        if self.max_distractors > 0 and not self.distractors:
            raise ValueError("distractors are required when max_distractors > 0")
        if self.distractor_weights is not None and len(self.distractor_weights) != len(self.distractors):
            raise ValueError("distractor_weights must align with distractors")
        if self.class_prior is not None:
            if len(self.class_prior) != self.num_classes or abs(sum(self.class_prior) - 1.0) > 1e-9:
                raise ValueError("class_prior must have one entry per class and sum to 1")
        if self.negation_token is not None and self.num_classes != 2:
            raise ValueError("negation only applies to binary tasks")
        trigger_set = {t for tokens in self.triggers.values() for t in tokens}
        if trigger_set & set(self.distractors):
            raise ValueError("trigger tokens may not also be distractors")
        if self.negation_token is not None and (
            self.negation_token in trigger_set or self.negation_token in self.distractors
        ):
            raise ValueError("negation token must be distinct from triggers and distractors")
        return self

    @property
    def prior(self) -> List[float]:
        if self.class_prior is not None:
            return list(self.class_prior)
        return [1.0 / self.num_classes] * self.num_classes

    def trigger_class(self, token: str) -> Optional[int]:
        for label, tokens in self.triggers.items():
            if token in tokens:
                return label
        return None


class MaskPolicy(str, Enum):
    """How a masked position is rewritten."""
    REPLACE = "replace"  # [MASK] id, attention kept
    DELETE = "delete"    # [PAD] id, attention bit cleared


class MaskDirection(str, Enum):
    KEEP_TOP_K = "keep-top-k"
    MASK_TOP_K = "mask-top-k"


class MaskingSpec(BaseModel):
    """One masking protocol setting; the direction is always explicit."""

    model_config = ConfigDict(frozen=True)

    k: float = Field(gt=0, le=1)
    direction: MaskDirection
    policy: MaskPolicy = MaskPolicy.REPLACE


class ExperimentConfig(BaseModel):
    """Top-level YAML experiment file: vocab path plus model and training sections."""

    vocab: str = "vocab.txt"
    model: Dict = Field(description="ModelConfig fields except vocab_size")
    train: TrainConfig = Field(default_factory=TrainConfig)


class MethodKind(str, Enum):
    """Token-ranking methods; values are the CLI spellings."""
    GRADIENT = "gradient"
    CLS_ATT = "cls-att"
    ATT = "att"
    ATT_GRAD = "att-grad"
    ATT_GRAD_R = "att-grad-r"
    ATT_X_ATT_GRAD = "att-x-att-grad"
    GRAD_SAM = "grad-sam"

    @property
    def needs_gradients(self) -> bool:
        return self not in (MethodKind.ATT, MethodKind.CLS_ATT)

    @property
    def uses_attention_maps(self) -> bool:
        """True for methods that aggregate per-head maps over layers, heads and keys."""
        return self not in (MethodKind.GRADIENT, MethodKind.CLS_ATT)


class GradientVariant(str, Enum):
    """Per-token reduction of the input-embedding gradient."""
    NORM = "norm"  # L2 norm of the gradient row
    DOT = "dot"    # gradient · embedding


class ImportanceAxis(str, Enum):
    """Which index of the combined map is aggregated into token importance."""
    ROW = "row"        # token i pays the attention (r_i sums row i)
    COLUMN = "column"  # token i receives the attention (r_i sums column i)

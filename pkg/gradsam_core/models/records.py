"""Pydantic models for dataset records and tokenized sequences."""

from typing import List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, computed_field, field_validator, model_validator

from gradsam_core.models.config import MaskPolicy


class DatasetRecord(BaseModel):
    """One labelled sentence.

    ``rationale`` holds word indices (positions in the whitespace/punctuation
    split of ``text``) of the gold rationale, when known.
    """

    id: str
    text: str
    label: int
    rationale: List[int] = Field(default_factory=list)
    split: str = "train"

    @field_validator("text")
    @classmethod
    def validate_text(cls, v: str) -> str:
        if not v.strip():
            raise ValueError("text must be nonempty")
        return v

    @field_validator("rationale")
    @classmethod
    def validate_rationale(cls, v: List[int]) -> List[int]:
        if any(i < 0 for i in v):
            raise ValueError(f"rationale indices must be nonnegative, got {v}")
        return sorted(set(v))


class TokenSequence(BaseModel):
    """A fixed-length encoded sentence.

    Position 0 is [CLS]; the last non-pad position is [SEP]; the attention
    mask is false exactly on [PAD] positions.
    """

    model_config = ConfigDict(frozen=True)

    ids: List[int]
    attention_mask: List[bool]
    tokens: List[str]
    spans: List[Optional[Tuple[int, int]]] = Field(
        description="Character span of each token in the source text; None for specials"
    )
    word_ids: List[Optional[int]] = Field(
        description="Source word index of each token; None for specials"
    )
    special: List[bool] = Field(description="True at [CLS], [SEP] and [PAD] positions")
    mask_policy: Optional[MaskPolicy] = None
    masked_positions: List[int] = Field(default_factory=list)

    @model_validator(mode="after")
    def check_lengths(self) -> "TokenSequence":
        n = len(self.ids)
        for name in ("attention_mask", "tokens", "spans", "word_ids", "special"):
            if len(getattr(self, name)) != n:
                raise ValueError(f"{name} has length {len(getattr(self, name))}, expected {n}")
        return self

    @computed_field
    @property
    def length(self) -> int:
        return len(self.ids)

    @property
    def real_positions(self) -> List[int]:
        """Positions of real, non-special tokens (the only explainable ones)."""
        return [i for i, s in enumerate(self.special) if not s]

    @property
    def real_count(self) -> int:
        return sum(1 for s in self.special if not s)

    def positions_of_words(self, word_indices: List[int]) -> List[int]:
        """Token positions whose source word is in ``word_indices``."""
        wanted = set(word_indices)
        return [i for i, w in enumerate(self.word_ids) if w is not None and w in wanted]

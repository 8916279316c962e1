"""Dataset records paired with their encoded sequences."""

from dataclasses import dataclass
from typing import Iterable, List, Optional

from gradsam_core.encoder.tokenizer import Tokenizer
from gradsam_core.models.records import DatasetRecord, TokenSequence


@dataclass(frozen=True)
class EncodedExample:
    """A record, its fixed-length encoding, and gold rationale token positions."""

    record: DatasetRecord
    sequence: TokenSequence
    gold_positions: List[int]

    @property
    def id(self) -> str:
        return self.record.id

    @property
    def label(self) -> int:
        return self.record.label


def encode_dataset(
    records: Iterable[DatasetRecord],
    tokenizer: Tokenizer,
    N: int,
    split: Optional[str] = None,
) -> List[EncodedExample]:
    """Encode records (optionally one split only) to length ``N``.

    Gold word indices are mapped to every wordpiece position of those words;
    pieces lost to truncation simply drop out.
    """
    out = []
    for record in records:
        if split is not None and record.split != split:
            continue
        seq = tokenizer.encode(record.text, N)
        out.append(EncodedExample(record, seq, seq.positions_of_words(record.rationale)))
    return out

"""Greedy longest-match wordpiece tokenizer with BERT-style specials.

The vocabulary file is UTF-8, one token per line, line number = id. The first
five lines must be ``[PAD] [UNK] [CLS] [SEP] [MASK]`` in that order.
"""

import logging
import math
import re
import string
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

from gradsam_core.errors import ConfigError, ContractError
from gradsam_core.models.config import MaskPolicy
from gradsam_core.models.records import TokenSequence

logger = logging.getLogger(__name__)

PAD, UNK, CLS, SEP, MASK = "[PAD]", "[UNK]", "[CLS]", "[SEP]", "[MASK]"
RESERVED_TOKENS = (PAD, UNK, CLS, SEP, MASK)
CONTINUATION_PREFIX = "##"

_WORD_RE = re.compile(r"\w+|[^\w\s]")
_ASCII_LOWER = str.maketrans(string.ascii_uppercase, string.ascii_lowercase)

# Guards ceil(k * count) against binary fractions such as 0.7 * 10 = 7.000000000000001.
_CEIL_SLACK = 1e-9


@dataclass(frozen=True)
class Vocab:
    """Immutable token↔id map with the five reserved tokens at ids 0-4."""

    tokens: Tuple[str, ...]
    token_to_id: Dict[str, int] = field(repr=False, compare=False)
    continuation_prefix: str = CONTINUATION_PREFIX

    @classmethod
    def from_tokens(cls, tokens: Iterable[str]) -> "Vocab":
        tokens = tuple(tokens)
        if not tokens:
            raise ConfigError("Vocabulary is empty")
        if tokens[: len(RESERVED_TOKENS)] != RESERVED_TOKENS:
            raise ConfigError(
                f"Vocabulary must start with {', '.join(RESERVED_TOKENS)} in that order, "
                f"got {', '.join(tokens[:len(RESERVED_TOKENS)])}"
            )
        mapping: Dict[str, int] = {}
        for i, token in enumerate(tokens):
            if not token:
                raise ConfigError(f"Vocabulary line {i + 1} is blank")
            if token in mapping:
                raise ConfigError(f"Vocabulary token '{token}' appears more than once")
            mapping[token] = i
        return cls(tokens=tokens, token_to_id=mapping)

    def __len__(self) -> int:
        return len(self.tokens)

    def __contains__(self, token: str) -> bool:
        return token in self.token_to_id

    def id_of(self, token: str) -> int:
        return self.token_to_id.get(token, self.unk_id)

    @property
    def pad_id(self) -> int:
        return self.token_to_id[PAD]

    @property
    def unk_id(self) -> int:
        return self.token_to_id[UNK]

    @property
    def cls_id(self) -> int:
        return self.token_to_id[CLS]

    @property
    def sep_id(self) -> int:
        return self.token_to_id[SEP]

    @property
    def mask_id(self) -> int:
        return self.token_to_id[MASK]


def load_vocab(path: Union[str, Path]) -> Vocab:
    """Read a vocabulary file.

    Raises:
        ConfigError: If the file is missing, empty, or the reserved tokens are
            not the first five lines.
    """
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"Vocabulary file does not exist: {path}")
    with open(path, "r", encoding="utf-8") as f:
        tokens = [line.rstrip("\n").rstrip("\r") for line in f]
    while tokens and tokens[-1] == "":
        tokens.pop()
    vocab = Vocab.from_tokens(tokens)
    logger.debug(f"Loaded vocabulary of {len(vocab)} tokens from {path}")
    return vocab


def select_top_k_count(k: float, real_count: int) -> int:
    """Number of tokens in the top k fraction: ceil(k · real_count).

    At least one token is selected whenever k > 0 and there is a real token.
    """
    if not 0 < k <= 1:
        raise ContractError(f"k must lie in (0, 1], got {k}")
    if real_count <= 0:
        return 0
    return min(real_count, max(1, math.ceil(k * real_count - _CEIL_SLACK)))


class Tokenizer:
    """Whitespace/punctuation pre-split, ASCII lowercasing, then wordpiece.

    Example:
        >>> vocab = Vocab.from_tokens(["[PAD]", "[UNK]", "[CLS]", "[SEP]", "[MASK]", "un", "##aff", "##able"])
        >>> Tokenizer(vocab).tokenize("Unaffable")
        ['un', '##aff', '##able']
    """

    def __init__(self, vocab: Vocab, lowercase: bool = True, max_chars_per_word: int = 100):
        if len(vocab) <= len(RESERVED_TOKENS):
            raise ConfigError("Vocabulary holds no tokens beyond the reserved ones")
        self.vocab = vocab
        self.lowercase = lowercase
        self.max_chars_per_word = max_chars_per_word

    def split_words(self, text: str) -> List[Tuple[str, int, int]]:
        """Words with their character spans in ``text``."""
        if self.lowercase:
            text = text.translate(_ASCII_LOWER)
        return [(m.group(0), m.start(), m.end()) for m in _WORD_RE.finditer(text)]

    def wordpiece(self, word: str) -> Optional[List[Tuple[str, int, int]]]:
        """Greedy longest-match segmentation of one word; None if any fragment is unknown."""
        if len(word) > self.max_chars_per_word:
            return None
        pieces = []
        start = 0
        while start < len(word):
            end = len(word)
            match = None
            while start < end:
                candidate = word[start:end]
                if start > 0:
                    candidate = self.vocab.continuation_prefix + candidate
                if candidate in self.vocab:
                    match = candidate
                    break
                end -= 1
            if match is None:
                return None
            pieces.append((match, start, end))
            start = end
        return pieces

    def _pieces(self, text: str) -> List[Tuple[str, Tuple[int, int], int]]:
        out = []
        for word_index, (word, w_start, w_end) in enumerate(self.split_words(text)):
            pieces = self.wordpiece(word)
            if pieces is None:
                out.append((UNK, (w_start, w_end), word_index))
            else:
                out.extend(
                    (piece, (w_start + p_start, w_start + p_end), word_index)
                    for piece, p_start, p_end in pieces
                )
        return out

    def tokenize(self, text: str) -> List[str]:
        """Wordpiece segmentation of ``text`` without specials."""
        return [piece for piece, _, _ in self._pieces(text)]

    def encode(self, text: str, N: int) -> TokenSequence:
        """Encode to exactly ``N`` positions: [CLS] pieces [SEP] [PAD]…

        Truncation keeps the first N−2 pieces.
        """
        if N < 3:
            raise ContractError(f"Sequence length must be at least 3, got {N}")
        pieces = self._pieces(text)[: N - 2]
        vocab = self.vocab

        tokens = [CLS] + [p for p, _, _ in pieces] + [SEP]
        spans: List[Optional[Tuple[int, int]]] = [None] + [s for _, s, _ in pieces] + [None]
        word_ids: List[Optional[int]] = [None] + [w for _, _, w in pieces] + [None]
        special = [True] + [False] * len(pieces) + [True]
        pad = N - len(tokens)

        return TokenSequence(
            ids=[vocab.id_of(t) for t in tokens] + [vocab.pad_id] * pad,
            attention_mask=[True] * len(tokens) + [False] * pad,
            tokens=tokens + [PAD] * pad,
            spans=spans + [None] * pad,
            word_ids=word_ids + [None] * pad,
            special=special + [True] * pad,
        )

    def decode(self, seq: TokenSequence, skip_specials: bool = True) -> List[str]:
        """Token strings of ``seq``; specials and pads dropped by default."""
        out = []
        for token_id, is_special in zip(seq.ids, seq.special):
            if skip_specials and is_special:
                continue
            out.append(self.vocab.tokens[token_id])
        return out


def apply_mask(
    seq: TokenSequence,
    keep: Iterable[int],
    vocab: Vocab,
    policy: MaskPolicy = MaskPolicy.REPLACE,
) -> TokenSequence:
    """Mask every real token whose position is not in ``keep``.

    ``replace`` writes [MASK] and leaves attention on; ``delete`` writes [PAD]
    and clears the attention bit, removing the token from attention while
    keeping every other position where it was. Specials are never touched.

    Raises:
        ContractError: If ``keep`` names a special, pad, or out-of-range position.
    """
    keep_set = set(keep)
    real = seq.real_positions
    invalid = keep_set - set(real)
    if invalid:
        raise ContractError(
            f"Keep set contains non-maskable positions {sorted(invalid)}; "
            f"only real token positions {real} may be kept"
        )

    ids = list(seq.ids)
    attention = list(seq.attention_mask)
    tokens = list(seq.tokens)
    special = list(seq.special)
    masked = [i for i in real if i not in keep_set]
    for i in masked:
        if policy == MaskPolicy.REPLACE:
            ids[i] = vocab.mask_id
            tokens[i] = MASK
        else:
            ids[i] = vocab.pad_id
            tokens[i] = PAD
            attention[i] = False
            special[i] = True

    return seq.model_copy(
        update={
            "ids": ids,
            "attention_mask": attention,
            "tokens": tokens,
            "special": special,
            "mask_policy": policy,
            "masked_positions": sorted(set(seq.masked_positions) | set(masked)),
        }
    )


def complement_positions(seq: TokenSequence, selected: Sequence[int]) -> List[int]:
    """Real-token positions not in ``selected``."""
    chosen = set(selected)
    return [i for i in seq.real_positions if i not in chosen]

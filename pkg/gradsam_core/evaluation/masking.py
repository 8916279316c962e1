"""Turning a ranking into kept and masked token sets."""

from typing import List, Sequence, Tuple

from gradsam_core.encoder.tokenizer import Vocab, apply_mask, complement_positions, select_top_k_count
from gradsam_core.errors import ContractError
from gradsam_core.models.config import MaskDirection, MaskingSpec
from gradsam_core.models.records import TokenSequence


def select_positions(
    seq: TokenSequence, ranking: Sequence[int], spec: MaskingSpec
) -> Tuple[List[int], List[int]]:
    """(kept, masked) real positions for one sentence.

    The top ceil(k · real_count) ranked positions are kept under keep-top-k
    and masked under mask-top-k; the two directions always select
    complementary sets.
    """
    real = set(seq.real_positions)
    if set(ranking) != real or len(ranking) != len(real):
        raise ContractError("Ranking must list every real token position exactly once")
    top = list(ranking[: select_top_k_count(spec.k, len(real))])
    rest = complement_positions(seq, top)
    if spec.direction == MaskDirection.KEEP_TOP_K:
        return sorted(top), rest
    return rest, sorted(top)


def mask_by_ranking(
    seq: TokenSequence, ranking: Sequence[int], spec: MaskingSpec, vocab: Vocab
) -> Tuple[TokenSequence, List[int], List[int]]:
    kept, masked = select_positions(seq, ranking, spec)
    return apply_mask(seq, kept, vocab, spec.policy), kept, masked

"""Tests for the vocabulary, wordpiece tokenizer and masking."""

import math

import numpy as np
import pytest

from gradsam_core.encoder.tokenizer import (
    CLS,
    MASK,
    PAD,
    SEP,
    UNK,
    Tokenizer,
    Vocab,
    apply_mask,
    complement_positions,
    load_vocab,
    select_top_k_count,
)
from gradsam_core.errors import ConfigError, ContractError
from gradsam_core.models.config import MaskPolicy
from tests.helpers import TOY_WORDS, toy_tokenizer, toy_vocab


@pytest.fixture
def tokenizer():
    return toy_tokenizer()


class TestVocab:
    """Test vocabulary loading and validation."""

    def test_reserved_ids(self):
        vocab = toy_vocab()
        assert (vocab.pad_id, vocab.unk_id, vocab.cls_id, vocab.sep_id, vocab.mask_id) == (0, 1, 2, 3, 4)

    def test_unknown_token_maps_to_unk(self):
        assert toy_vocab().id_of("zebra") == 1

    def test_reserved_order_enforced(self):
        with pytest.raises(ConfigError, match="must start with"):
            Vocab.from_tokens([UNK, PAD, CLS, SEP, MASK, "a"])

    def test_duplicates_rejected(self):
        with pytest.raises(ConfigError, match="more than once"):
            Vocab.from_tokens([PAD, UNK, CLS, SEP, MASK, "a", "a"])

    def test_empty_vocab_rejected(self):
        with pytest.raises(ConfigError):
            Vocab.from_tokens([])

    def test_tokenizer_needs_real_tokens(self):
        with pytest.raises(ConfigError):
            Tokenizer(Vocab.from_tokens([PAD, UNK, CLS, SEP, MASK]))

    def test_load_vocab_file(self, tmp_path):
        path = tmp_path / "vocab.txt"
        path.write_text("\n".join([PAD, UNK, CLS, SEP, MASK, "good", "bad"]) + "\n\n", encoding="utf-8")
        vocab = load_vocab(path)
        assert len(vocab) == 7
        assert vocab.id_of("bad") == 6

    def test_missing_vocab_file(self, tmp_path):
        with pytest.raises(ConfigError, match="does not exist"):
            load_vocab(tmp_path / "missing.txt")

    def test_bundled_vocab_loads(self):
        from gradsam_core.utils.paths import get_vocab_path

        vocab = load_vocab(get_vocab_path())
        assert "good" in vocab and "not" in vocab


class TestEncode:
    """Test fixed-length encoding."""

    def test_empty_text(self, tokenizer):
        seq = tokenizer.encode("", 5)
        assert seq.tokens == [CLS, SEP, PAD, PAD, PAD]
        assert seq.attention_mask == [True, True, False, False, False]
        assert seq.real_count == 0

    def test_exact_fit_has_no_padding(self, tokenizer):
        seq = tokenizer.encode("the movie was good", 6)
        assert PAD not in seq.tokens
        assert all(seq.attention_mask)
        assert seq.tokens[0] == CLS and seq.tokens[-1] == SEP

    def test_truncation_keeps_first_pieces(self, tokenizer):
        seq = tokenizer.encode("the movie was good today", 5)
        assert seq.tokens == [CLS, "the", "movie", "was", SEP]

    def test_lowercase_and_punctuation(self, tokenizer):
        assert tokenizer.tokenize("The movie, GOOD!") == ["the", "movie", ",", "good", "!"]

    def test_wordpiece_longest_match(self, tokenizer):
        assert tokenizer.tokenize("unaffable plays") == ["un", "##aff", "##able", "play", "##s"]

    def test_unknown_fragment_becomes_unk(self, tokenizer):
        seq = tokenizer.encode("good zebra", 6)
        assert seq.tokens[:4] == [CLS, "good", UNK, SEP]
        assert seq.spans[2] == (5, 10)

    def test_special_flags_and_word_ids(self, tokenizer):
        seq = tokenizer.encode("playing good", 8)
        assert seq.special == [True, False, False, False, True, True, True, True]
        assert seq.word_ids[:5] == [None, 0, 0, 1, None]
        assert seq.positions_of_words([1]) == [3]

    def test_sequence_length_minimum(self, tokenizer):
        with pytest.raises(ContractError):
            tokenizer.encode("good", 2)

    def test_round_trip_on_fuzzed_corpus(self, tokenizer):
        rng = np.random.default_rng(0)
        words = [w for w in TOY_WORDS if not w.startswith("##")] + ["zebra", "GOOD", "playing"]
        for _ in range(200):
            text = " ".join(rng.choice(words, size=int(rng.integers(0, 8))))
            seq = tokenizer.encode(text, 12)
            assert tokenizer.decode(seq) == tokenizer.tokenize(text)[:10]

    def test_encode_is_deterministic(self, tokenizer):
        assert tokenizer.encode("a good film", 8) == tokenizer.encode("a good film", 8)


class TestApplyMask:
    """Test mask policies."""

    def test_keep_everything_is_identity(self, tokenizer):
        seq = tokenizer.encode("the movie was good", 8)
        masked = apply_mask(seq, seq.real_positions, tokenizer.vocab)
        assert masked.ids == seq.ids
        assert masked.attention_mask == seq.attention_mask
        assert masked.mask_policy == MaskPolicy.REPLACE

    def test_keep_nothing_masks_every_real_token(self, tokenizer):
        seq = tokenizer.encode("the movie was good", 8)
        masked = apply_mask(seq, [], tokenizer.vocab)
        assert masked.tokens == [CLS, MASK, MASK, MASK, MASK, SEP, PAD, PAD]
        assert masked.attention_mask == seq.attention_mask
        assert masked.masked_positions == [1, 2, 3, 4]

    def test_delete_policy_pads_in_place(self, tokenizer):
        seq = tokenizer.encode("the movie was good", 8)
        masked = apply_mask(seq, [4], tokenizer.vocab, MaskPolicy.DELETE)
        assert masked.tokens == [CLS, PAD, PAD, PAD, "good", SEP, PAD, PAD]
        assert masked.attention_mask == [True, False, False, False, True, True, False, False]
        assert masked.real_positions == [4]
        assert len(masked.ids) == len(seq.ids)

    def test_special_positions_cannot_be_kept(self, tokenizer):
        seq = tokenizer.encode("good", 5)
        with pytest.raises(ContractError, match="non-maskable"):
            apply_mask(seq, [0, 1], tokenizer.vocab)

    def test_complement(self, tokenizer):
        seq = tokenizer.encode("the movie was good", 8)
        assert complement_positions(seq, [2, 4]) == [1, 3]

    def test_top_k_selection_matches_brute_force(self, tokenizer):
        rng = np.random.default_rng(7)
        seq = tokenizer.encode("the movie was good today and it is a great film", 16)
        scores = rng.standard_normal(seq.length)
        count = select_top_k_count(0.2, seq.real_count)
        brute = sorted(seq.real_positions, key=lambda i: -scores[i])[:count]
        ranked = sorted(seq.real_positions, key=lambda i: (-scores[i], i))
        masked = apply_mask(seq, ranked[:count], tokenizer.vocab)
        kept = [i for i in seq.real_positions if i not in masked.masked_positions]
        assert kept == sorted(brute)
        assert count == math.ceil(0.2 * seq.real_count)


class TestTopKCount:
    """Test ceil rounding of k% over real tokens."""

    @pytest.mark.parametrize("real_count", range(1, 11))
    def test_boundary_counts(self, real_count):
        for k in (0.1, 0.2, 0.3, 0.5, 0.7, 1.0):
            expected = max(1, math.ceil(round(k * real_count, 9)))
            assert select_top_k_count(k, real_count) == expected

    def test_binary_fraction_overshoot(self):
        # 0.7 * 10 evaluates to 7.000000000000001
        assert select_top_k_count(0.7, 10) == 7

    def test_at_least_one_token(self):
        assert select_top_k_count(0.01, 3) == 1

    def test_no_real_tokens(self):
        assert select_top_k_count(0.2, 0) == 0

    @pytest.mark.parametrize("k", [0, -0.1, 1.5])
    def test_k_out_of_range(self, k):
        with pytest.raises(ContractError):
            select_top_k_count(k, 5)

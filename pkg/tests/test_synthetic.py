"""Tests for planted-trigger corpus generation."""

from collections import Counter

import pytest
from pydantic import ValidationError

from gradsam_core.errors import ConfigError
from gradsam_core.models.config import SyntheticTaskSpec
from gradsam_core.training.synthetic import generate_corpus, label_rule, validate_task_vocab
from gradsam_core.utils.paths import get_task_path
from gradsam_core.utils.yaml_handler import load_model, read_yaml
from tests.helpers import toy_tokenizer

DISTRACTORS = ["the", "a", "movie", "film", "was", "is", "today", "plot", "it", "and"]


def sentiment_spec(**overrides) -> SyntheticTaskSpec:
    fields = dict(
        name="toy",
        triggers={0: ["bad"], 1: ["good"]},
        distractors=DISTRACTORS,
    )
    fields.update(overrides)
    return SyntheticTaskSpec(**fields)


class TestLabelRule:
    """Test the label rule."""

    def test_trigger_decides(self):
        spec = sentiment_spec()
        assert label_rule(["the", "good", "movie"], spec) == 1
        assert label_rule(["bad"], spec) == 0

    def test_negation_flips(self):
        spec = sentiment_spec(negation_token="not", negation_rate=0.5)
        assert label_rule(["not", "a", "good", "film"], spec) == 0

    @pytest.mark.parametrize("words", [["the", "movie"], ["good", "bad"]])
    def test_exactly_one_trigger(self, words):
        with pytest.raises(ValueError):
            label_rule(words, sentiment_spec())


class TestGenerateCorpus:
    """Test corpus generation."""

    def test_labels_match_independent_rule(self):
        records = generate_corpus(sentiment_spec(), 4, seed=7)
        assert len(records) == 4
        for record in records:
            words = record.text.split()
            assert record.label == (1 if "good" in words else 0)

    def test_rationale_points_at_trigger(self):
        for record in generate_corpus(sentiment_spec(), 50, seed=1):
            words = record.text.split()
            assert [words[i] for i in record.rationale] == [["bad", "good"][record.label]]

    def test_negation_rationale_and_label(self):
        spec = sentiment_spec(negation_token="not", negation_rate=0.5)
        records = generate_corpus(spec, 200, seed=3)
        negated = [r for r in records if "not" in r.text.split()]
        assert negated
        for record in records:
            words = record.text.split()
            assert record.label == label_rule(words, spec)
            picked = [words[i] for i in record.rationale]
            if "not" in words:
                assert picked[0] == "not" and picked[1] in ("good", "bad")
            else:
                assert len(picked) == 1

    def test_zero_distractors(self):
        spec = sentiment_spec(min_distractors=0, max_distractors=0)
        for record in generate_corpus(spec, 10, seed=0):
            assert record.text in ("good", "bad")
            assert record.rationale == [0]

    def test_prior_at_ten_thousand(self):
        spec = sentiment_spec(class_prior=[0.3, 0.7])
        records = generate_corpus(spec, 10_000, seed=11)
        share = Counter(r.label for r in records)[1] / len(records)
        assert abs(share - 0.7) <= 0.05

    def test_same_seed_same_corpus(self):
        spec = sentiment_spec()
        assert generate_corpus(spec, 20, seed=5) == generate_corpus(spec, 20, seed=5)
        assert generate_corpus(spec, 20, seed=5) != generate_corpus(spec, 20, seed=6)

    def test_contiguous_splits(self):
        records = generate_corpus(sentiment_spec(), 10, seed=0)
        assert [r.split for r in records] == ["train"] * 8 + ["validation", "test"]
        assert records[0].id == "toy-00000"

    def test_sentence_lengths_within_bounds(self):
        spec = sentiment_spec(min_distractors=2, max_distractors=4)
        lengths = {len(r.text.split()) for r in generate_corpus(spec, 100, seed=2)}
        assert lengths <= {3, 4, 5}

    def test_negative_count(self):
        with pytest.raises(ConfigError):
            generate_corpus(sentiment_spec(), -1)

    def test_trigger_outside_vocab(self):
        spec = sentiment_spec(triggers={0: ["dreadful"], 1: ["good"]})
        with pytest.raises(ConfigError, match="dreadful"):
            generate_corpus(spec, 5, tokenizer=toy_tokenizer())

    def test_multi_piece_word_rejected(self):
        spec = sentiment_spec(distractors=["the", "plays"])
        with pytest.raises(ConfigError, match="plays"):
            validate_task_vocab(spec, toy_tokenizer())


class TestSyntheticTaskSpec:
    """Test task spec validation."""

    def test_triggers_cover_every_class(self):
        with pytest.raises(ValidationError, match="cover classes"):
            sentiment_spec(num_classes=3)

    def test_triggers_distinct_from_distractors(self):
        with pytest.raises(ValidationError):
            sentiment_spec(distractors=["the", "good"])

    def test_negation_binary_only(self):
        with pytest.raises(ValidationError):
            SyntheticTaskSpec(
                num_classes=3,
                triggers={0: ["goal"], 1: ["vote"], 2: ["chip"]},
                distractors=["the"],
                negation_token="not",
            )

    def test_split_fractions_sum_to_one(self):
        with pytest.raises(ValidationError):
            sentiment_spec(split_fractions={"train": 0.5, "test": 0.4})

    @pytest.mark.parametrize("name", ["single_trigger", "negation", "topics"])
    def test_bundled_tasks_fit_bundled_vocab(self, name):
        from gradsam_core.encoder.tokenizer import Tokenizer, load_vocab
        from gradsam_core.utils.paths import get_vocab_path

        spec = load_model(get_task_path(name), SyntheticTaskSpec)
        validate_task_vocab(spec, Tokenizer(load_vocab(get_vocab_path())))

    @pytest.mark.parametrize("name", ["single_trigger", "negation", "topics"])
    def test_bundled_task_words_load_as_strings(self, name):
        raw = read_yaml(get_task_path(name))
        words = list(raw["distractors"]) + [w for ws in raw["triggers"].values() for w in ws]
        words += [raw["negation_token"]] if "negation_token" in raw else []
        assert all(isinstance(word, str) for word in words), [w for w in words if not isinstance(w, str)]
        assert "on" in raw["distractors"]

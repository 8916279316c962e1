"""Tests for masking protocols, rankers and rationale recovery."""

import numpy as np
import pytest

from gradsam_core.attribution.explain import explain
from gradsam_core.encoder.examples import encode_dataset
from gradsam_core.errors import ContractError, EvaluationError
from gradsam_core.evaluation.masking import select_positions
from gradsam_core.evaluation.protocols import aopc_eval, evaluate, full_predictions, masked_eval, recompute_row
from gradsam_core.evaluation.rankers import OracleRanker, RandomRanker, Ranker
from gradsam_core.evaluation.recovery import rationale_recovery, recovery_from_rankings
from gradsam_core.models.config import MaskDirection, MaskingSpec, MethodKind, SyntheticTaskSpec
from gradsam_core.models.records import DatasetRecord
from gradsam_core.models.results import AttributionResult, EvalRow
from gradsam_core.training.synthetic import generate_corpus
from tests.helpers import micro_config, random_weights, toy_tokenizer, trigger_detector

KEEP = MaskDirection.KEEP_TOP_K
DROP = MaskDirection.MASK_TOP_K

SENTENCES = [
    ("the movie was good", 1, [3]),
    ("good film", 1, [0]),
    ("it is bad", 0, [2]),
    ("a bad plot and a film", 0, [1]),
    ("the film was great today", 1, [3]),
    ("awful", 0, [0]),
]


@pytest.fixture
def tokenizer():
    return toy_tokenizer()


@pytest.fixture
def weights():
    return random_weights(micro_config(N=8), seed=5)


@pytest.fixture
def examples(tokenizer):
    records = [
        DatasetRecord(id=f"s{i}", text=text, label=label, rationale=rationale)
        for i, (text, label, rationale) in enumerate(SENTENCES)
    ]
    return encode_dataset(records, tokenizer, 8)


class TestSelectPositions:
    """Test kept and masked sets."""

    def test_directions_are_complementary(self, examples):
        seq = examples[0].sequence
        ranking = [3, 1, 4, 2]
        kept, masked = select_positions(seq, ranking, MaskingSpec(k=0.5, direction=KEEP))
        kept_m, masked_m = select_positions(seq, ranking, MaskingSpec(k=0.5, direction=DROP))
        assert (kept, masked) == ([1, 3], [2, 4])
        assert (kept_m, masked_m) == (masked, kept)

    def test_ranking_must_cover_real_tokens(self, examples):
        with pytest.raises(ContractError):
            select_positions(examples[0].sequence, [1, 2, 3], MaskingSpec(k=0.5, direction=KEEP))


class TestMaskedEval:
    """Test keep-top-k and mask-top-k runs."""

    def test_keeping_everything_changes_nothing(self, weights, examples, tokenizer):
        row = masked_eval(weights, examples, "grad-sam", MaskingSpec(k=1.0, direction=KEEP), tokenizer.vocab)
        assert all(r.prediction_masked == r.prediction_full for r in row.records)
        assert row.metric_value == row.full_metric
        assert all(r.masked == [] for r in row.records)

    def test_keep_and_mask_select_complements(self, weights, examples, tokenizer):
        keep = masked_eval(weights, examples, MethodKind.ATT, MaskingSpec(k=0.3, direction=KEEP), tokenizer.vocab)
        drop = aopc_eval(weights, examples, MethodKind.ATT, MaskingSpec(k=0.3, direction=DROP), tokenizer.vocab)
        for a, b in zip(keep.records, drop.records):
            assert a.kept == b.masked and a.masked == b.kept
        assert keep.aopc is None
        assert drop.aopc == pytest.approx(drop.full_metric - drop.metric_value)

    def test_direction_is_checked(self, weights, examples, tokenizer):
        with pytest.raises(ContractError):
            masked_eval(weights, examples, "att", MaskingSpec(k=0.2, direction=DROP), tokenizer.vocab)
        with pytest.raises(ContractError):
            aopc_eval(weights, examples, "att", MaskingSpec(k=0.2, direction=KEEP), tokenizer.vocab)

    def test_records_reproduce_aggregates(self, weights, examples, tokenizer):
        row = masked_eval(
            weights, examples, "gradient", MaskingSpec(k=0.2, direction=KEEP), tokenizer.vocab, metric="accuracy"
        )
        rebuilt = recompute_row(row.model_copy(update={"metric_value": -1.0}), "accuracy", [0, 1])
        assert rebuilt.metric_value == row.metric_value
        assert rebuilt.full_metric == row.full_metric

    def test_no_sentences(self, weights, tokenizer):
        with pytest.raises(EvaluationError):
            masked_eval(weights, [], "att", MaskingSpec(k=0.2, direction=KEEP), tokenizer.vocab)


class TestAopcArithmetic:
    def test_drop_is_full_minus_masked(self):
        row = EvalRow(method="m", k=0.2, direction=DROP, metric_value=0.7, full_metric=0.9)
        assert row.aopc == pytest.approx(0.2)
        assert row.model_dump()["aopc"] == pytest.approx(0.2)


class TestEvaluate:
    """Test the full evaluation sweep."""

    def test_every_cell_present(self, weights, examples, tokenizer):
        report = evaluate(
            weights,
            examples,
            tokenizer.vocab,
            [MethodKind.ATT, MethodKind.GRAD_SAM],
            ks=(0.2, 0.5),
            random_seeds=[0, 1],
            oracle=True,
            corpus_id="toy",
        )
        assert len(report.rows) == 5 * 2 * 2
        assert len(report.find("random", 0.2, DROP)) == 2
        assert [(r.method, r.label) for r in report.recovery] == [
            (method, label) for method in ("att", "grad-sam", "oracle") for label in (None, 0, 1)
        ]
        overall = report.recovery_for("oracle")
        assert overall.evaluated == sum(report.recovery_for("oracle", label).evaluated for label in (0, 1))
        assert report.model_hash == weights.content_hash()
        assert report.labels == [0, 1]

    def test_threads_match_serial(self, weights, examples, tokenizer):
        serial = evaluate(weights, examples, tokenizer.vocab, [MethodKind.GRAD_SAM], random_seeds=[3])
        threaded = evaluate(weights, examples, tokenizer.vocab, [MethodKind.GRAD_SAM], random_seeds=[3], workers=4)
        assert serial.model_dump() == threaded.model_dump()

    def test_empty(self, weights, tokenizer):
        with pytest.raises(EvaluationError):
            evaluate(weights, [], tokenizer.vocab, [MethodKind.ATT])


class TestRankers:
    """Test baseline rankers."""

    def test_random_is_reproducible_permutation(self, examples):
        example = examples[4]
        first = RandomRanker(7).rank(example)
        assert first == RandomRanker(7).rank(example)
        assert sorted(first) == example.sequence.real_positions

    def test_random_depends_on_seed(self, examples):
        rankings = {tuple(RandomRanker(seed).rank(examples[3])) for seed in range(10)}
        assert len(rankings) > 1

    def test_oracle_puts_gold_first(self, examples):
        assert OracleRanker().rank(examples[0]) == [4, 1, 2, 3]


class TestRecovery:
    """Test top-1 hit rate and mean reciprocal rank."""

    def test_oracle_is_perfect(self, examples):
        rankings = [OracleRanker().rank(ex) for ex in examples]
        stats = recovery_from_rankings("oracle", rankings, [ex.label for ex in examples], examples)
        assert stats.evaluated == len(examples)
        assert stats.top1_hit_rate == 1.0
        assert stats.mean_reciprocal_rank == 1.0

    def test_reversed_oracle(self, examples):
        chosen = examples[:3]
        rankings = [list(reversed(OracleRanker().rank(ex))) for ex in chosen]
        stats = recovery_from_rankings("reversed", rankings, [1, 1, 0], chosen)
        assert stats.top1_hit_rate == 0.0
        assert stats.mean_reciprocal_rank == pytest.approx((1 / 4 + 1 / 2 + 1 / 3) / 3)

    def test_misclassified_sentences_skipped(self, examples):
        chosen = examples[:2]
        rankings = [OracleRanker().rank(ex) for ex in chosen]
        stats = recovery_from_rankings("oracle", rankings, [1, 0], chosen)
        assert stats.evaluated == 1

    def test_requires_rationales(self, tokenizer):
        plain = encode_dataset([DatasetRecord(id="x", text="good", label=1)], tokenizer, 8)
        with pytest.raises(ContractError):
            recovery_from_rankings("m", [[1]], [1], plain)

    def test_from_attribution_results(self, weights, examples):
        results = [explain(ex.sequence, weights, "att") for ex in examples]
        stats = rationale_recovery(results, examples)
        expected = recovery_from_rankings(
            "att", [r.ranking for r in results], [r.prediction for r in results], examples
        )
        assert stats == expected
        assert stats.evaluated == sum(r.prediction == ex.label for r, ex in zip(results, examples))

    def test_results_need_predictions(self, examples):
        bare = AttributionResult(method="att", tokens=[], ranking=[])
        with pytest.raises(ContractError):
            rationale_recovery([bare], examples[:1])


PLANTED = SyntheticTaskSpec(
    name="planted",
    triggers={0: ["bad", "awful"], 1: ["good", "great"]},
    distractors=["the", "a", "movie", "film", "was", "is", "today", "plot", "it", "and"],
    min_distractors=1,
    max_distractors=5,
)


class DistractorsFirst(Ranker):
    """Every non-rationale token ahead of the rationale."""

    name = "distractors-first"

    def rank(self, example):
        return list(reversed(OracleRanker().rank(example)))


@pytest.fixture(scope="module")
def detector():
    tokenizer = toy_tokenizer()
    return tokenizer, trigger_detector(tokenizer, ["good", "great"], ["bad", "awful"])


@pytest.fixture(scope="module")
def planted(detector):
    tokenizer, _ = detector
    return encode_dataset(generate_corpus(PLANTED, 1000, seed=11), tokenizer, 8)


class TestPlantedCorpus:
    """Test the harness against a model that reads only the planted trigger."""

    def test_detector_is_accurate(self, detector, planted):
        _, weights = detector
        assert full_predictions(weights, planted) == [ex.label for ex in planted]

    def test_oracle_keeps_full_text_f1(self, detector, planted):
        tokenizer, weights = detector
        row = masked_eval(weights, planted, OracleRanker(), MaskingSpec(k=0.2, direction=KEEP), tokenizer.vocab)
        assert abs(row.metric_value - row.full_metric) <= 0.02

    def test_random_below_oracle(self, detector, planted):
        tokenizer, weights = detector
        spec = MaskingSpec(k=0.2, direction=KEEP)
        oracle = masked_eval(weights, planted, OracleRanker(), spec, tokenizer.vocab)
        random = masked_eval(weights, planted, RandomRanker(0), spec, tokenizer.vocab)
        assert random.metric_value < oracle.metric_value

    def test_oracle_f1_non_decreasing_in_k(self, detector, planted):
        tokenizer, weights = detector
        scores = [
            masked_eval(weights, planted[:300], OracleRanker(), MaskingSpec(k=k / 10, direction=KEEP), tokenizer.vocab).metric_value
            for k in range(1, 11)
        ]
        for before, after in zip(scores, scores[1:]):
            assert after >= before - 0.01

    def test_masking_distractors_first_has_no_aopc(self, detector, planted):
        tokenizer, weights = detector
        spec = MaskingSpec(k=0.2, direction=DROP)
        distractors = aopc_eval(weights, planted, DistractorsFirst(), spec, tokenizer.vocab).aopc
        randoms = [aopc_eval(weights, planted, RandomRanker(seed), spec, tokenizer.vocab).aopc for seed in range(5)]
        band = 2 * float(np.std(randoms))
        assert abs(distractors) <= band
        assert distractors < min(randoms)

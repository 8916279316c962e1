"""Tests for classification metrics."""

import numpy as np
import pytest

from gradsam_core.errors import ConfigError, ContractError
from gradsam_core.evaluation.metrics import accuracy, get_metric, macro_f1, metric_names, per_class_f1


def f1_by_counting(preds, golds, labels):
    """Macro-F1 straight from true/false positive counts."""
    scores = []
    for label in labels:
        tp = sum(p == label and g == label for p, g in zip(preds, golds))
        fp = sum(p == label and g != label for p, g in zip(preds, golds))
        fn = sum(p != label and g == label for p, g in zip(preds, golds))
        scores.append(1.0 if tp + fp + fn == 0 else 2 * tp / (2 * tp + fp + fn))
    return sum(scores) / len(scores)


class TestMacroF1:
    """Test macro-F1 against hand and counting oracles."""

    def test_perfect_predictions(self):
        assert macro_f1([0, 1, 2, 1], [0, 1, 2, 1]) == 1.0

    def test_constant_predictions_on_balanced_binary(self):
        assert macro_f1([0, 0, 0, 0], [0, 0, 1, 1], labels=[0, 1]) == pytest.approx(1 / 3)

    def test_matches_counting_oracle(self):
        rng = np.random.default_rng(0)
        for _ in range(50):
            golds = rng.integers(0, 4, size=30).tolist()
            preds = rng.integers(0, 4, size=30).tolist()
            assert macro_f1(preds, golds, labels=[0, 1, 2, 3]) == pytest.approx(
                f1_by_counting(preds, golds, [0, 1, 2, 3])
            )

    def test_class_absent_everywhere_scores_one(self):
        scores = per_class_f1([0, 1], [0, 1], labels=[0, 1, 2])
        assert scores == {0: 1.0, 1: 1.0, 2: 1.0}

    def test_labels_inferred_from_data(self):
        assert set(per_class_f1([0, 2], [0, 0])) == {0, 2}

    def test_length_mismatch(self):
        with pytest.raises(ContractError):
            macro_f1([0], [0, 1])

    def test_empty_lists(self):
        with pytest.raises(ContractError):
            macro_f1([], [])


class TestRegistry:
    """Test metric lookup."""

    def test_known_metrics(self):
        assert metric_names() == ["macro_f1", "accuracy"]
        assert get_metric("accuracy") is accuracy
        assert accuracy([1, 0, 1, 1], [1, 1, 1, 1]) == 0.75

    def test_unknown_metric(self):
        with pytest.raises(ConfigError, match="Unknown metric 'f2'"):
            get_metric("f2")

"""Tests for the high-level client and the operations it wraps."""

import pytest

from gradsam_core import GradSamClient
from gradsam_core.encoder.weights import init_weights
from gradsam_core.errors import IntegrityError
from gradsam_core.store.weights_io import save_weights
from gradsam_core.utils.yaml_handler import write_yaml
from tests.helpers import micro_config, toy_vocab


@pytest.fixture
def client():
    return GradSamClient()


@pytest.fixture
def weights_file(tmp_path):
    path = tmp_path / "model.json"
    save_weights(init_weights(micro_config(N=8), seed=2), path, vocab=toy_vocab())
    return path


class TestGenerateData:
    """Test corpus generation through the client."""

    def test_bundled_task(self, client, tmp_path):
        result = client.generate_data("negation", 50, 3, tmp_path / "neg.jsonl")
        assert result["success"] is True
        assert result["records"] == 50
        assert result["split_counts"] == {"train": 40, "validation": 5, "test": 5}
        assert len(result["outputs"]) == 2

    def test_custom_data_dir(self, tmp_path):
        tasks = tmp_path / "data" / "tasks"
        tasks.mkdir(parents=True)
        (tmp_path / "data" / "vocab.txt").write_text("\n".join(toy_vocab().tokens) + "\n")
        write_yaml(tasks / "mini.yaml", {"name": "mini", "triggers": {0: ["bad"], 1: ["good"]}, "distractors": ["the", "film"]})
        client = GradSamClient(tmp_path)
        assert client.list_tasks() == ["mini"]
        result = client.generate_data("mini", 10, 0, tmp_path / "mini.csv")
        assert result["success"] is True

    def test_task_word_outside_vocab(self, tmp_path):
        tasks = tmp_path / "data" / "tasks"
        tasks.mkdir(parents=True)
        (tmp_path / "data" / "vocab.txt").write_text("\n".join(toy_vocab().tokens) + "\n")
        write_yaml(tasks / "odd.yaml", {"triggers": {0: ["dreadful"], 1: ["good"]}, "distractors": ["the"]})
        result = GradSamClient(tmp_path).generate_data("odd", 10, 0, tmp_path / "odd.jsonl")
        assert result["success"] is False
        assert result["error_kind"] == "config"
        assert "dreadful" in result["message"]


class TestTrainErrors:
    """Test train failures surface as responses."""

    def test_missing_config(self, client, tmp_path):
        result = client.train(tmp_path / "d.jsonl", "no_such_config", tmp_path / "m.json")
        assert result["success"] is False
        assert result["error_kind"] == "config"

    def test_zero_epochs_writes_initial_weights(self, client, tmp_path):
        data = tmp_path / "d.jsonl"
        client.generate_data("single_trigger", 20, 0, data)
        result = client.train(data, "tiny", tmp_path / "m.json", epochs=0)
        assert result["success"] is True
        assert result["history"] == []
        assert result["validation_accuracy"] is None
        assert client.load(tmp_path / "m.json").weights.content_hash() == result["weights_hash"]

    @pytest.mark.parametrize("overrides", [{"epochs": -1}, {"epochs": "two"}])
    def test_invalid_override_is_config_error(self, client, tmp_path, overrides):
        data = tmp_path / "d.jsonl"
        client.generate_data("single_trigger", 20, 0, data)
        result = client.train(data, "tiny", tmp_path / "m.json", **overrides)
        assert result["success"] is False
        assert result["error_kind"] == "config"
        assert "epochs" in result["message"]
        assert not (tmp_path / "m.json").exists()


class TestLoadedModel:
    """Test in-memory explanation."""

    def test_explain_text(self, client, weights_file):
        model = client.load(weights_file)
        result = model.explain("a good film", "att", k=0.4)
        assert result.text == "a good film"
        assert sorted(result.ranking) == [1, 2, 3]
        assert len(result.top_k) == 2

    def test_explain_operation_matches(self, client, weights_file):
        response = client.explain(weights_file, "grad-sam", text="a good film")
        direct = client.load(weights_file).explain("a good film")
        assert response["results"][0]["ranking"] == direct.ranking

    def test_corrupted_weights(self, client, weights_file):
        weights_file.with_suffix(".bin").write_bytes(b"")
        with pytest.raises(IntegrityError):
            client.load(weights_file)

"""Tests for path utilities managing the data directory."""

from pathlib import Path

import pytest

from gradsam_core.utils.paths import (
    DATA_DIR_ENV,
    PathsError,
    get_data_dir,
    get_task_path,
    get_vocab_path,
    list_tasks,
    resolve_data_file,
)


@pytest.fixture
def data_root(tmp_path):
    tasks = tmp_path / "data" / "tasks"
    tasks.mkdir(parents=True)
    (tasks / "b_task.yaml").write_text("name: b\n")
    (tasks / "a_task.yaml").write_text("name: a\n")
    (tmp_path / "data" / "notes.txt").write_text("x")
    return tmp_path


class TestGetDataDir:
    """Test data directory resolution."""

    def test_base_path_wins(self, tmp_path, monkeypatch):
        monkeypatch.setenv(DATA_DIR_ENV, "/elsewhere")
        assert get_data_dir(tmp_path) == tmp_path / "data"

    def test_environment_override(self, tmp_path, monkeypatch):
        monkeypatch.setenv(DATA_DIR_ENV, str(tmp_path))
        assert get_data_dir() == tmp_path

    def test_default_is_project_data(self, monkeypatch):
        monkeypatch.delenv(DATA_DIR_ENV, raising=False)
        data_dir = get_data_dir()
        assert data_dir.name == "data"
        assert (data_dir / "vocab.txt").exists()

    def test_derived_paths(self, tmp_path):
        assert get_vocab_path(tmp_path) == tmp_path / "data" / "vocab.txt"
        assert get_task_path("negation", tmp_path) == tmp_path / "data" / "tasks" / "negation.yaml"


class TestListTasks:
    """Test bundled task discovery."""

    def test_sorted_names(self, data_root):
        assert list_tasks(data_root) == ["a_task", "b_task"]

    def test_missing_folder(self, tmp_path):
        assert list_tasks(tmp_path) == []

    def test_bundled_tasks(self, monkeypatch):
        monkeypatch.delenv(DATA_DIR_ENV, raising=False)
        assert {"single_trigger", "negation", "topics"} <= set(list_tasks())


class TestResolveDataFile:
    """Test resolving user-given names."""

    def test_existing_path_wins(self, data_root, tmp_path):
        own = tmp_path / "own.yaml"
        own.write_text("name: own\n")
        assert resolve_data_file(own, "tasks", data_root) == own

    def test_bare_name_gets_yaml_suffix(self, data_root):
        assert resolve_data_file("a_task", "tasks", data_root) == data_root / "data" / "tasks" / "a_task.yaml"

    def test_file_in_data_dir(self, data_root):
        assert resolve_data_file("notes.txt", None, data_root) == data_root / "data" / "notes.txt"

    def test_not_found(self, data_root):
        with pytest.raises(PathsError, match="not found"):
            resolve_data_file("c_task", "tasks", data_root)

"""Path utilities for the project data directory."""

import os
from pathlib import Path
from typing import List, Optional, Union

DATA_DIR_ENV = "GRADSAM_DATA_DIR"


class PathsError(Exception):
    """Exception raised for path-related errors."""

    pass


def get_data_dir(base_path: Optional[Path] = None) -> Path:
    """Get the data directory path.

    Resolution order: ``base_path / "data"`` when given, then the
    ``GRADSAM_DATA_DIR`` environment variable, then ``data/`` at the project root.

    Args:
        base_path: Optional base path containing a ``data`` folder.

    Returns:
        Path to the data directory
    """
    if base_path is not None:
        return Path(base_path) / "data"
    override = os.getenv(DATA_DIR_ENV)
    if override:
        return Path(override)
    # gradsam_core/utils/paths.py -> project root
    return Path(__file__).parent.parent.parent / "data"


def get_vocab_path(base_path: Optional[Path] = None) -> Path:
    return get_data_dir(base_path) / "vocab.txt"


def get_tasks_dir(base_path: Optional[Path] = None) -> Path:
    return get_data_dir(base_path) / "tasks"


def get_configs_dir(base_path: Optional[Path] = None) -> Path:
    return get_data_dir(base_path) / "configs"


def get_task_path(name: str, base_path: Optional[Path] = None) -> Path:
    """Path of a bundled task spec by name.

    Example:
        >>> get_task_path("single_trigger").name
        'single_trigger.yaml'
    """
    return get_tasks_dir(base_path) / f"{name}.yaml"


def list_tasks(base_path: Optional[Path] = None) -> List[str]:
    """Names of the bundled task specs."""
    tasks_dir = get_tasks_dir(base_path)
    if not tasks_dir.exists():
        return []
    return sorted(p.stem for p in tasks_dir.glob("*.yaml"))


def resolve_data_file(
    name: Union[str, Path], subdir: Optional[str] = None, base_path: Optional[Path] = None
) -> Path:
    """Resolve a user-given file: an existing path wins, then the data directory.

    ``subdir`` names a data subfolder (``tasks``, ``configs``); a bare name
    without suffix gets ``.yaml`` there.

    Raises:
        PathsError: If no candidate exists.
    """
    candidate = Path(name)
    if candidate.exists():
        return candidate
    folder = get_data_dir(base_path) / subdir if subdir else get_data_dir(base_path)
    tries = [folder / candidate]
    if not candidate.suffix:
        tries.append(folder / f"{candidate}.yaml")
    for path in tries:
        if path.exists():
            return path
    raise PathsError(f"File '{name}' not found (also looked in {folder})")

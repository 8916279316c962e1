"""YAML documents for task specs and experiment configs.

Every failure surfaces as ``YAMLHandlerError``, a ``ConfigError``, so the CLI
reports bad config files with exit status 2.
"""

from pathlib import Path
from typing import Any, Dict, Mapping, Type, TypeVar, Union

import yaml
from pydantic import BaseModel, ValidationError

from gradsam_core.errors import ConfigError

ModelT = TypeVar("ModelT", bound=BaseModel)
PathLike = Union[str, Path]


class YAMLHandlerError(ConfigError):
    """A config document could not be read, parsed, validated or written."""

    pass


def read_yaml(file_path: PathLike) -> Dict[str, Any]:
    """Parse a config document into a mapping.

    An empty document reads as ``{}``.

    Raises:
        YAMLHandlerError: If the file is missing or unreadable, is not valid
            YAML, or its top level is not a mapping.
    """
    path = Path(file_path)
    if not path.is_file():
        raise YAMLHandlerError(f"File does not exist: {path}")
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise YAMLHandlerError(f"Cannot read {path}: {e}") from e
    try:
        document = yaml.safe_load(text)
    except yaml.YAMLError as e:
        mark = getattr(e, "problem_mark", None)
        where = f" (line {mark.line + 1})" if mark is not None else ""
        raise YAMLHandlerError(f"Failed to parse {path}{where}: {e}") from e

    if document is None:
        return {}
    if not isinstance(document, dict):
        raise YAMLHandlerError(
            f"{path} must hold a mapping at the top level, got {type(document).__name__}"
        )
    return document


def write_yaml(file_path: PathLike, data: Union[Mapping[str, Any], BaseModel]) -> Path:
    """Write a mapping or a pydantic model as block-style YAML, keys in insertion order."""
    path = Path(file_path)
    if isinstance(data, BaseModel):
        data = data.model_dump(mode="json", exclude_none=True)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(
            yaml.safe_dump(dict(data), default_flow_style=False, allow_unicode=True, sort_keys=False),
            encoding="utf-8",
        )
    except OSError as e:
        raise YAMLHandlerError(f"Cannot write {path}: {e}") from e
    return path


def load_model(file_path: PathLike, model: Type[ModelT]) -> ModelT:
    """Read a config document and validate it as ``model``.

    Raises:
        YAMLHandlerError: If the file is unreadable or fails validation.
    """
    data = read_yaml(file_path)
    try:
        return model.model_validate(data)
    except ValidationError as e:
        raise YAMLHandlerError(f"Invalid {model.__name__} in {file_path}: {e}") from e

"""Run manifests: what a command read, wrote, and was configured with."""

import json
import logging
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Union

from pydantic import ValidationError

from gradsam_core.errors import ConfigError, IntegrityError
from gradsam_core.models.results import RunManifest
from gradsam_core.store.hashing import sha256_file, sha256_json

logger = logging.getLogger(__name__)


def _now() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


def _hash_paths(paths: Iterable[Union[str, Path]]) -> Dict[str, str]:
    return {str(p): sha256_file(p) for p in paths}


def start_manifest(
    command: str,
    parameters: Optional[Dict[str, Any]] = None,
    seeds: Optional[Dict[str, int]] = None,
    configs: Optional[Dict[str, Any]] = None,
    inputs: Iterable[Union[str, Path]] = (),
) -> RunManifest:
    """Manifest for a run that is about to start; ``configs`` are hashed, not stored."""
    from gradsam_core import __version__

    return RunManifest(
        tool_version=__version__,
        command=command,
        parameters=parameters or {},
        seeds=seeds or {},
        config_hashes={name: sha256_json(value) for name, value in (configs or {}).items()},
        inputs=_hash_paths(inputs),
        started_at=_now(),
    )


def finish_manifest(manifest: RunManifest, outputs: Iterable[Union[str, Path]]) -> RunManifest:
    return manifest.model_copy(update={"outputs": _hash_paths(outputs), "finished_at": _now()})


def write_manifest(manifest: RunManifest, path: Union[str, Path]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write(manifest.model_dump_json(indent=2))
        f.write("\n")
    logger.info(f"Wrote run manifest to {path}")
    return path


def read_manifest(path: Union[str, Path]) -> RunManifest:
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"Manifest does not exist: {path}")
    try:
        with open(path, "r", encoding="utf-8") as f:
            return RunManifest.model_validate(json.load(f))
    except (json.JSONDecodeError, ValidationError) as e:
        raise IntegrityError(f"Manifest {path} is malformed: {e}") from e


def verify_manifest(path: Union[str, Path], strict: bool = True) -> List[str]:
    """Re-hash every input and output a manifest records.

    Returns the list of problems; with ``strict`` any problem raises instead.

    Raises:
        IntegrityError: In strict mode, if a file is missing or changed.
    """
    manifest = read_manifest(path)
    problems = []
    for kind, entries in (("input", manifest.inputs), ("output", manifest.outputs)):
        for file_path, digest in entries.items():
            if not Path(file_path).exists():
                problems.append(f"{kind} {file_path} is missing")
            elif sha256_file(file_path) != digest:
                problems.append(f"{kind} {file_path} changed since the run")
    if problems and strict:
        raise IntegrityError("; ".join(problems))
    return problems

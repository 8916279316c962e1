"""Evaluation reports and attribution results on disk.

Reports are wrapped in an envelope carrying the sha256 of their canonical
JSON, so a tampered report fails to load. Scores of special tokens are
written as the string "-inf".
"""

import csv
import json
import logging
from pathlib import Path
from typing import Any, List, Sequence, Union

from pydantic import ValidationError

from gradsam_core.errors import ConfigError, IntegrityError
from gradsam_core.models.results import AttributionResult, EvalReport
from gradsam_core.store.hashing import canonical_json, sha256_json

logger = logging.getLogger(__name__)

REPORT_FORMAT = "gradsam-eval-report/1"
CSV_COLUMNS = ["method", "k", "direction", "seed", "metric", "value"]


def _write_json(path: Path, data: Any) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write(json.dumps(data, indent=2, sort_keys=True, ensure_ascii=False, allow_nan=False))
        f.write("\n")


def _read_json(path: Path) -> Any:
    if not path.exists():
        raise ConfigError(f"File does not exist: {path}")
    try:
        with open(path, "r", encoding="utf-8") as f:
            return json.load(f)
    except json.JSONDecodeError as e:
        raise IntegrityError(f"{path} is not valid JSON: {e}") from e


def report_to_json(report: EvalReport) -> str:
    """Canonical serialization; identical reports give identical strings."""
    return canonical_json(report.model_dump(mode="json"))


def save_report(report: EvalReport, path: Union[str, Path]) -> str:
    """Write ``report`` inside a hashed envelope; returns the payload sha256."""
    path = Path(path)
    payload = report.model_dump(mode="json")
    digest = sha256_json(payload)
    _write_json(path, {"format": REPORT_FORMAT, "sha256": digest, "report": payload})
    logger.info(f"Saved evaluation report to {path} (sha256 {digest[:12]})")
    return digest


def load_report(path: Union[str, Path]) -> EvalReport:
    """Read a report envelope.

    Raises:
        IntegrityError: If the envelope is malformed or its hash does not match.
    """
    path = Path(path)
    data = _read_json(path)
    if not isinstance(data, dict) or data.get("format") != REPORT_FORMAT:
        raise IntegrityError(f"{path} is not a {REPORT_FORMAT} file")
    payload = data.get("report")
    if sha256_json(payload) != data.get("sha256"):
        raise IntegrityError(f"Report {path} does not match its recorded sha256")
    try:
        return EvalReport.model_validate(payload)
    except ValidationError as e:
        raise IntegrityError(f"Report {path} failed validation: {e}") from e


def export_report_csv(report: EvalReport, path: Union[str, Path]) -> Path:
    """Flat (method, k, direction, seed, metric, value) table for spreadsheets."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for row in report.rows:
            seed = "" if row.seed is None else row.seed
            base = [row.method, repr(row.k), row.direction.value, seed]
            writer.writerow(base + [report.metric, repr(row.metric_value)])
            writer.writerow(base + [f"full_{report.metric}", repr(row.full_metric)])
            if row.aopc is not None:
                writer.writerow(base + ["aopc", repr(row.aopc)])
        for stats in report.recovery:
            suffix = "" if stats.label is None else f"_label{stats.label}"
            writer.writerow([stats.method, "", "", "", f"top1_hit_rate{suffix}", repr(stats.top1_hit_rate)])
            writer.writerow(
                [stats.method, "", "", "", f"mean_reciprocal_rank{suffix}", repr(stats.mean_reciprocal_rank)]
            )
    logger.info(f"Exported report table to {path}")
    return path


def save_attributions(
    results: Union[AttributionResult, Sequence[AttributionResult]], path: Union[str, Path]
) -> Path:
    """One result is written as an object, several as a list."""
    path = Path(path)
    if isinstance(results, AttributionResult):
        data: Any = results.model_dump(mode="json")
    else:
        data = [r.model_dump(mode="json") for r in results]
    _write_json(path, data)
    return path


def load_attributions(path: Union[str, Path]) -> List[AttributionResult]:
    path = Path(path)
    data = _read_json(path)
    items = data if isinstance(data, list) else [data]
    try:
        return [AttributionResult.model_validate(item) for item in items]
    except ValidationError as e:
        raise IntegrityError(f"{path} does not hold attribution results: {e}") from e

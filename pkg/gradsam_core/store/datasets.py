"""Labelled sentence files: JSON-lines (canonical) and CSV.

Each record has ``text``, ``label``, optional ``rationale`` (word indices),
``split`` and ``id``. Records without an id get ``<file stem>-<line>``.
"""

import csv
import json
import logging
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Sequence, Union

from pydantic import ValidationError

from gradsam_core.errors import ConfigError, DatasetError
from gradsam_core.models.records import DatasetRecord

logger = logging.getLogger(__name__)

FORMATS = ("jsonl", "csv")
CSV_FIELDS = ["id", "text", "label", "rationale", "split"]


def infer_format(path: Union[str, Path], format: Optional[str] = None) -> str:
    if format is not None:
        if format not in FORMATS:
            raise ConfigError(f"Unknown dataset format '{format}'. Must be one of: {', '.join(FORMATS)}")
        return format
    suffix = Path(path).suffix.lower().lstrip(".")
    if suffix in ("jsonl", "ndjson"):
        return "jsonl"
    if suffix == "csv":
        return "csv"
    raise ConfigError(f"Cannot infer dataset format from '{path}'; pass format='jsonl' or 'csv'")


def _parse_rationale(value: Any) -> List[int]:
    if value is None or value == "":
        return []
    if isinstance(value, str):
        return [int(part) for part in value.replace(",", " ").replace(";", " ").split()]
    return list(value)


def _to_record(
    raw: Dict[str, Any], line: int, default_id: str, labels: Optional[Sequence[int]]
) -> DatasetRecord:
    if not isinstance(raw, dict):
        raise DatasetError("record must be an object", line)
    data = dict(raw)
    data.setdefault("id", default_id)
    data["id"] = str(data["id"])
    try:
        data["rationale"] = _parse_rationale(data.get("rationale"))
        if data.get("split") in (None, ""):
            data.pop("split", None)
        record = DatasetRecord.model_validate(data)
    except (ValidationError, ValueError, TypeError) as e:
        raise DatasetError(f"invalid record: {e}", line) from e
    if labels is not None and record.label not in labels:
        raise DatasetError(f"unknown label {record.label}; expected one of {list(labels)}", line)
    return record


def _read_jsonl(path: Path) -> Iterable[tuple]:
    with open(path, "r", encoding="utf-8") as f:
        for line_no, line in enumerate(f, start=1):
            if not line.strip():
                continue
            try:
                yield line_no, json.loads(line)
            except json.JSONDecodeError as e:
                raise DatasetError(f"malformed JSON: {e.msg}", line_no) from e


def _read_csv(path: Path) -> Iterable[tuple]:
    with open(path, "r", encoding="utf-8", newline="") as f:
        reader = csv.DictReader(f)
        if reader.fieldnames is None:
            return
        missing = {"text", "label"} - set(reader.fieldnames)
        if missing:
            raise DatasetError(f"CSV header lacks {sorted(missing)}", 1)
        for row in reader:
            # Header is line 1; DictReader tracks physical lines.
            yield reader.line_num, {k: v for k, v in row.items() if k is not None}


def load_dataset(
    path: Union[str, Path],
    format: Optional[str] = None,
    labels: Optional[Sequence[int]] = None,
) -> List[DatasetRecord]:
    """Read and validate a dataset file.

    Raises:
        ConfigError: If the file is missing or the format is unknown.
        DatasetError: For a malformed record, a label outside ``labels`` or a
            duplicate id (the message carries the line number).
    """
    path = Path(path)
    fmt = infer_format(path, format)
    if not path.exists():
        raise ConfigError(f"Dataset file does not exist: {path}")

    rows = _read_jsonl(path) if fmt == "jsonl" else _read_csv(path)
    records: List[DatasetRecord] = []
    seen = set()
    for line_no, raw in rows:
        record = _to_record(raw, line_no, f"{path.stem}-{line_no:05d}", labels)
        if record.id in seen:
            raise DatasetError(f"duplicate record id '{record.id}'", line_no)
        seen.add(record.id)
        records.append(record)

    if not records:
        logger.warning(f"Dataset {path} is empty")
    else:
        logger.info(f"Loaded {len(records)} records from {path}")
    return records


def save_dataset(
    records: Iterable[DatasetRecord], path: Union[str, Path], format: Optional[str] = None
) -> Path:
    path = Path(path)
    fmt = infer_format(path, format)
    path.parent.mkdir(parents=True, exist_ok=True)
    records = list(records)
    if fmt == "jsonl":
        with open(path, "w", encoding="utf-8", newline="\n") as f:
            for record in records:
                f.write(json.dumps(record.model_dump(), ensure_ascii=False) + "\n")
    else:
        with open(path, "w", encoding="utf-8", newline="") as f:
            writer = csv.DictWriter(f, fieldnames=CSV_FIELDS, lineterminator="\n")
            writer.writeheader()
            for record in records:
                row = record.model_dump()
                row["rationale"] = " ".join(str(i) for i in record.rationale)
                writer.writerow(row)
    logger.info(f"Wrote {len(records)} records to {path}")
    return path

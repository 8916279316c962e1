"""Datasets, weights, reports and run manifests on disk."""

from gradsam_core.store.datasets import load_dataset, save_dataset
from gradsam_core.store.hashing import canonical_json, sha256_bytes, sha256_file, sha256_json
from gradsam_core.store.manifest import (
    finish_manifest,
    read_manifest,
    start_manifest,
    verify_manifest,
    write_manifest,
)
from gradsam_core.store.reports import (
    export_report_csv,
    load_attributions,
    load_report,
    report_to_json,
    save_attributions,
    save_report,
)
from gradsam_core.store.weights_io import WeightsBundle, load_weights, read_weights, save_weights

__all__ = [
    "load_dataset",
    "save_dataset",
    "canonical_json",
    "sha256_bytes",
    "sha256_file",
    "sha256_json",
    "finish_manifest",
    "read_manifest",
    "start_manifest",
    "verify_manifest",
    "write_manifest",
    "export_report_csv",
    "load_attributions",
    "load_report",
    "report_to_json",
    "save_attributions",
    "save_report",
    "WeightsBundle",
    "load_weights",
    "read_weights",
    "save_weights",
]

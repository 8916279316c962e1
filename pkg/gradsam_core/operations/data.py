"""Synthetic corpus generation."""

import logging
from collections import Counter
from pathlib import Path
from typing import Any, Dict, Optional, Union

from gradsam_core.encoder.tokenizer import Tokenizer
from gradsam_core.models.config import SyntheticTaskSpec
from gradsam_core.operations.common import close_manifest, load_default_vocab, resolve
from gradsam_core.store.datasets import save_dataset
from gradsam_core.store.manifest import start_manifest
from gradsam_core.training.synthetic import generate_corpus
from gradsam_core.utils.responses import exception_response, success_response
from gradsam_core.utils.yaml_handler import load_model

logger = logging.getLogger(__name__)


def generate_data(
    spec: Union[str, Path],
    count: int,
    seed: int,
    out: Union[str, Path],
    vocab_path: Optional[Union[str, Path]] = None,
    base_path: Optional[Path] = None,
) -> Dict[str, Any]:
    """Generate a planted-trigger corpus and write it as JSON-lines (or CSV by suffix).

    Args:
        spec: Task spec file, or the name of a bundled task (``single_trigger``).
        count: Number of sentences.
        seed: Sampling seed.
        out: Output dataset path.
        vocab_path: Vocabulary the task words must belong to; defaults to the bundled one.
        base_path: Optional base path for the data directory (for testing).

    Returns:
        Dictionary with either:
        - success: True, records, label_counts, split_counts, outputs
        - success: False, error, error_kind
    """
    try:
        spec_path = resolve(spec, "tasks", base_path)
        task = load_model(spec_path, SyntheticTaskSpec)
        vocab, vocab_file = load_default_vocab(vocab_path, base_path)
        manifest = start_manifest(
            "gen-data",
            parameters={"spec": str(spec_path), "count": count},
            seeds={"data": seed},
            configs={"task": task.model_dump(mode="json")},
            inputs=[spec_path, vocab_file],
        )

        records = generate_corpus(task, count, seed, Tokenizer(vocab))
        out_path = save_dataset(records, out)
        manifest_file = close_manifest(manifest, [out_path])

        return success_response(
            f"Generated {len(records)} '{task.name}' sentences",
            outputs=[out_path, manifest_file],
            records=len(records),
            label_counts=dict(sorted(Counter(r.label for r in records).items())),
            split_counts=dict(Counter(r.split for r in records)),
        )
    except Exception as e:
        logger.error(f"gen-data failed: {e}")
        return exception_response(e)

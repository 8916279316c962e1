"""SGW1 weight files.

A weight file is a pair: a JSON manifest (``model.json``) and one raw blob
(``model.bin``) holding every tensor row-major and little-endian, in
manifest order. The manifest records each tensor's shape, byte offset and
length, plus the blob size and sha256, so truncation or tampering is
detected on load. The vocabulary the model was trained with is embedded.
"""

import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, Optional, Union

import numpy as np

from gradsam_core.encoder.tokenizer import Vocab
from gradsam_core.encoder.weights import EncoderWeights, parameter_shapes
from gradsam_core.errors import ConfigError, IntegrityError
from gradsam_core.models.config import ModelConfig
from gradsam_core.store.hashing import sha256_bytes

logger = logging.getLogger(__name__)

FORMAT = "SGW1"


@dataclass
class WeightsBundle:
    weights: EncoderWeights
    vocab: Optional[Vocab] = None
    manifest: Dict[str, Any] = field(default_factory=dict)


def blob_path_for(manifest_path: Union[str, Path]) -> Path:
    return Path(manifest_path).with_suffix(".bin")


def save_weights(
    weights: EncoderWeights, path: Union[str, Path], vocab: Optional[Vocab] = None
) -> Dict[str, Any]:
    """Write the manifest at ``path`` and the blob next to it; returns the manifest."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    precision = weights.config.precision.value
    dtype = np.dtype(precision).newbyteorder("<")

    chunks = []
    tensors = []
    offset = 0
    for name in weights:
        data = np.ascontiguousarray(weights[name], dtype=dtype).tobytes()
        tensors.append(
            {"name": name, "shape": list(weights[name].shape), "offset": offset, "nbytes": len(data)}
        )
        chunks.append(data)
        offset += len(data)
    blob = b"".join(chunks)

    blob_path = blob_path_for(path)
    manifest = {
        "format": FORMAT,
        "config": weights.config.model_dump(mode="json", exclude={"positions", "hidden_ffn"}),
        "precision": precision,
        "byte_order": "little",
        "tensors": tensors,
        "blob": blob_path.name,
        "blob_size": len(blob),
        "blob_sha256": sha256_bytes(blob),
        "content_hash": weights.content_hash(),
        "vocab": list(vocab.tokens) if vocab is not None else None,
    }
    with open(blob_path, "wb") as f:
        f.write(blob)
    with open(path, "w", encoding="utf-8") as f:
        json.dump(manifest, f, indent=2)
        f.write("\n")
    logger.info(f"Saved weights to {path} (sha256 {manifest['blob_sha256'][:12]})")
    return manifest


def read_weights(path: Union[str, Path]) -> WeightsBundle:
    """Load and verify an SGW1 manifest/blob pair.

    Raises:
        ConfigError: If the manifest is missing.
        IntegrityError: If the manifest is malformed, or the blob is missing,
            truncated or does not match its recorded hash.
    """
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"Weights manifest does not exist: {path}")
    try:
        with open(path, "r", encoding="utf-8") as f:
            manifest = json.load(f)
    except json.JSONDecodeError as e:
        raise IntegrityError(f"Weights manifest {path} is not valid JSON: {e}") from e
    if not isinstance(manifest, dict) or manifest.get("format") != FORMAT:
        raise IntegrityError(f"{path} is not an {FORMAT} manifest")

    try:
        config = ModelConfig.model_validate(manifest["config"])
        blob_path = path.parent / manifest["blob"]
        tensors = list(manifest["tensors"])
        blob_size = int(manifest["blob_size"])
        blob_sha = manifest["blob_sha256"]
    except (KeyError, TypeError, ValueError) as e:
        raise IntegrityError(f"Weights manifest {path} is incomplete: {e}") from e

    if not blob_path.exists():
        raise IntegrityError(f"Weights blob {blob_path} is missing")
    blob = blob_path.read_bytes()
    if len(blob) != blob_size:
        raise IntegrityError(
            f"Weights blob {blob_path} has {len(blob)} bytes, manifest records {blob_size} (truncated?)"
        )
    if sha256_bytes(blob) != blob_sha:
        raise IntegrityError(f"Weights blob {blob_path} does not match its recorded sha256")

    dtype = np.dtype(manifest.get("precision", config.precision.value)).newbyteorder("<")
    expected = parameter_shapes(config)
    arrays = {}
    for entry in tensors:
        try:
            name, shape = str(entry["name"]), tuple(int(size) for size in entry["shape"])
            start, nbytes = int(entry["offset"]), int(entry["nbytes"])
        except (KeyError, TypeError, ValueError) as e:
            raise IntegrityError(f"Weights manifest {path} has a malformed tensor entry: {e!r}") from e
        if expected.get(name) != shape:
            raise IntegrityError(f"Tensor '{name}' shape {shape} does not match the config")
        if start < 0 or start + nbytes > len(blob) or nbytes != dtype.itemsize * int(np.prod(shape)):
            raise IntegrityError(f"Tensor '{name}' extent lies outside the blob")
        arrays[name] = np.frombuffer(blob, dtype=dtype, count=nbytes // dtype.itemsize, offset=start).reshape(shape)

    weights = EncoderWeights.from_arrays(config, arrays)
    vocab = Vocab.from_tokens(manifest["vocab"]) if manifest.get("vocab") else None
    logger.debug(f"Loaded weights from {path}")
    return WeightsBundle(weights=weights, vocab=vocab, manifest=manifest)


def load_weights(path: Union[str, Path]) -> EncoderWeights:
    return read_weights(path).weights

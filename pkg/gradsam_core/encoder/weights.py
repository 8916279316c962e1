"""Encoder parameters: canonical tensor names, shapes and initialization.

Matrices are stored in row-major "input × output" orientation so every
projection is ``X @ W`` with tokens as rows.
"""

import hashlib
from dataclasses import dataclass
from typing import Dict, Iterator, List, Mapping, Optional, Tuple

import numpy as np

from gradsam_core.autodiff.tape import resolve_dtype
from gradsam_core.errors import ConfigError, DimensionError, NonFiniteError
from gradsam_core.models.config import ModelConfig


def head_prefix(layer: int, head: int) -> str:
    return f"layers.{layer}.heads.{head}"


def parameter_shapes(cfg: ModelConfig) -> Dict[str, Tuple[int, int]]:
    """Ordered map of every learnable tensor name to its shape."""
    d, d_a, F = cfg.d, cfg.d_a, cfg.hidden_ffn
    shapes: Dict[str, Tuple[int, int]] = {
        "embeddings.token": (cfg.vocab_size, d),
        "embeddings.position": (cfg.positions, d),
        "embeddings.segment": (cfg.num_segments, d),
        "embeddings.norm.gamma": (1, d),
        "embeddings.norm.beta": (1, d),
    }
    for l in range(cfg.L):
        for m in range(cfg.M):
            prefix = head_prefix(l, m)
            shapes[f"{prefix}.query"] = (d, d_a)
            shapes[f"{prefix}.key"] = (d, d_a)
            shapes[f"{prefix}.value"] = (d, d_a)
            shapes[f"{prefix}.value_bias"] = (1, d_a)
        shapes[f"layers.{l}.attention.output"] = (d, d)
        shapes[f"layers.{l}.attention.output_bias"] = (1, d)
        shapes[f"layers.{l}.attention.norm.gamma"] = (1, d)
        shapes[f"layers.{l}.attention.norm.beta"] = (1, d)
        shapes[f"layers.{l}.ffn.inner"] = (d, F)
        shapes[f"layers.{l}.ffn.inner_bias"] = (1, F)
        shapes[f"layers.{l}.ffn.outer"] = (F, d)
        shapes[f"layers.{l}.ffn.outer_bias"] = (1, d)
        shapes[f"layers.{l}.ffn.norm.gamma"] = (1, d)
        shapes[f"layers.{l}.ffn.norm.beta"] = (1, d)
    shapes["pooler.weight"] = (d, d)
    shapes["pooler.bias"] = (1, d)
    shapes["classifier.weight"] = (d, cfg.n)
    shapes["classifier.bias"] = (1, cfg.n)
    return shapes


@dataclass(frozen=True)
class EncoderWeights:
    """Immutable set of encoder tensors, shareable across threads."""

    config: ModelConfig
    tensors: Mapping[str, np.ndarray]

    def __post_init__(self) -> None:
        expected = parameter_shapes(self.config)
        missing = [name for name in expected if name not in self.tensors]
        extra = [name for name in self.tensors if name not in expected]
        if missing or extra:
            raise ConfigError(
                f"Weights do not match config: missing {missing[:5]}, unexpected {extra[:5]}"
            )
        dtype = resolve_dtype(self.config.precision.value)
        for name, shape in expected.items():
            array = self.tensors[name]
            if array.shape != shape:
                raise DimensionError(f"Tensor '{name}' has shape {array.shape}, expected {shape}")
            if array.dtype != dtype:
                raise ConfigError(f"Tensor '{name}' is {array.dtype}, expected {dtype}")
            if not np.all(np.isfinite(array)):
                raise NonFiniteError(f"Tensor '{name}' contains non-finite values")
            array.setflags(write=False)

    @classmethod
    def from_arrays(
        cls, config: ModelConfig, arrays: Mapping[str, np.ndarray], copy: bool = True
    ) -> "EncoderWeights":
        """Build weights in canonical order, casting to the config precision."""
        dtype = resolve_dtype(config.precision.value)
        ordered = {}
        for name in parameter_shapes(config):
            if name not in arrays:
                raise ConfigError(f"Missing tensor '{name}'")
            ordered[name] = (
                np.array(arrays[name], dtype=dtype) if copy else np.asarray(arrays[name], dtype=dtype)
            )
        return cls(config=config, tensors=ordered)

    def __getitem__(self, name: str) -> np.ndarray:
        return self.tensors[name]

    def __iter__(self) -> Iterator[str]:
        return iter(self.tensors)

    def names(self) -> List[str]:
        return list(self.tensors)

    def with_tensors(self, updates: Mapping[str, np.ndarray]) -> "EncoderWeights":
        arrays = dict(self.tensors)
        arrays.update(updates)
        return EncoderWeights.from_arrays(self.config, arrays)

    def as_precision(self, precision: str) -> "EncoderWeights":
        """Same tensors cast to another precision (e.g. float64 for oracles)."""
        fields = self.config.model_dump(exclude={"positions", "hidden_ffn"})
        fields["precision"] = precision
        return EncoderWeights.from_arrays(ModelConfig(**fields), self.tensors)

    def content_hash(self) -> str:
        """sha256 over the raw little-endian bytes of every tensor in canonical order."""
        digest = hashlib.sha256()
        for name in self.tensors:
            array = self.tensors[name]
            digest.update(np.ascontiguousarray(array, dtype=array.dtype.newbyteorder("<")).tobytes())
        return digest.hexdigest()

    def equals(self, other: "EncoderWeights") -> bool:
        """Bit-exact equality of config and every tensor."""
        if self.config != other.config or list(self.tensors) != list(other.tensors):
            return False
        return all(np.array_equal(self.tensors[n], other.tensors[n]) for n in self.tensors)


def init_weights(cfg: ModelConfig, seed: int = 0) -> EncoderWeights:
    """Seeded scaled-uniform initialization, bound 1/sqrt(fan_in).

    Embedding tables use the hidden width as fan-in; layer-norm gains start
    at one and every bias at zero.
    """
    rng = np.random.default_rng(seed)
    arrays = {}
    for name, shape in parameter_shapes(cfg).items():
        if name.endswith(".gamma"):
            arrays[name] = np.ones(shape)
        elif name.endswith(".beta") or name.endswith("bias"):
            arrays[name] = np.zeros(shape)
        else:
            fan_in = cfg.d if name.startswith("embeddings.") else shape[0]
            bound = 1.0 / np.sqrt(fan_in)
            arrays[name] = rng.uniform(-bound, bound, size=shape)
    return EncoderWeights.from_arrays(cfg, arrays, copy=False)

"""Loaders shared by the operations: experiment configs, vocabularies, weights."""

import logging
from pathlib import Path
from typing import Iterable, Optional, Tuple, Union

from gradsam_core.encoder.tokenizer import Tokenizer, Vocab, load_vocab
from gradsam_core.errors import ConfigError
from gradsam_core.models.config import ExperimentConfig, ModelConfig
from gradsam_core.models.results import RunManifest
from gradsam_core.store.manifest import finish_manifest, write_manifest
from gradsam_core.store.weights_io import WeightsBundle, read_weights
from gradsam_core.utils.paths import PathsError, get_vocab_path, resolve_data_file
from gradsam_core.utils.yaml_handler import load_model

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]


def resolve(name: PathLike, subdir: Optional[str], base_path: Optional[Path]) -> Path:
    try:
        return resolve_data_file(name, subdir, base_path)
    except PathsError as e:
        raise ConfigError(str(e)) from e


def load_experiment(
    config_path: PathLike, base_path: Optional[Path] = None
) -> Tuple[ExperimentConfig, Vocab, ModelConfig, Path]:
    """Experiment config, its vocabulary and the resulting model config.

    The ``vocab`` entry is resolved next to the config file first, then in
    the data directory.
    """
    path = resolve(config_path, "configs", base_path)
    experiment = load_model(path, ExperimentConfig)
    vocab_file = path.parent / experiment.vocab
    if not vocab_file.exists():
        vocab_file = resolve(experiment.vocab, None, base_path)
    vocab = load_vocab(vocab_file)
    fields = dict(experiment.model)
    fields["vocab_size"] = len(vocab)
    try:
        model_config = ModelConfig.model_validate(fields)
    except ValueError as e:
        raise ConfigError(f"Invalid model section in {path}: {e}") from e
    return experiment, vocab, model_config, path


def load_default_vocab(vocab_path: Optional[PathLike], base_path: Optional[Path]) -> Tuple[Vocab, Path]:
    path = Path(vocab_path) if vocab_path else get_vocab_path(base_path)
    return load_vocab(path), path


def load_model_bundle(
    weights_path: PathLike, vocab_path: Optional[PathLike] = None
) -> Tuple[WeightsBundle, Tokenizer]:
    """Weights plus the tokenizer over their embedded (or an explicit) vocabulary."""
    bundle = read_weights(weights_path)
    if vocab_path is not None:
        vocab = load_vocab(vocab_path)
    elif bundle.vocab is not None:
        vocab = bundle.vocab
    else:
        raise ConfigError(f"Weights {weights_path} embed no vocabulary; pass a vocab file")
    if len(vocab) != bundle.weights.config.vocab_size:
        raise ConfigError(
            f"Vocabulary has {len(vocab)} tokens, weights expect {bundle.weights.config.vocab_size}"
        )
    return bundle, Tokenizer(vocab)


def manifest_path_for(output: PathLike) -> Path:
    output = Path(output)
    return output.with_name(output.name + ".manifest.json")


def close_manifest(manifest: RunManifest, outputs: Iterable[PathLike]) -> Path:
    outputs = [Path(p) for p in outputs]
    path = manifest_path_for(outputs[0])
    write_manifest(finish_manifest(manifest, outputs), path)
    return path


def parse_choice(enum_cls, value, what: str):
    """Enum member from its value, as a config error when unknown."""
    try:
        return enum_cls(value)
    except ValueError:
        choices = ", ".join(member.value for member in enum_cls)
        raise ConfigError(f"Unknown {what} '{value}'. Must be one of: {choices}") from None

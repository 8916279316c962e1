"""Model training from an experiment config."""

import logging
from dataclasses import asdict
from pathlib import Path
from typing import Any, Dict, Optional, Union

from pydantic import ValidationError

from gradsam_core.encoder.tokenizer import Tokenizer
from gradsam_core.encoder.weights import init_weights
from gradsam_core.errors import ConfigError
from gradsam_core.models.config import TrainConfig
from gradsam_core.operations.common import close_manifest, load_experiment
from gradsam_core.store.datasets import load_dataset
from gradsam_core.store.manifest import start_manifest
from gradsam_core.store.weights_io import save_weights
from gradsam_core.training.trainer import train
from gradsam_core.utils.responses import exception_response, success_response

logger = logging.getLogger(__name__)


def train_model(
    data: Union[str, Path],
    config: Union[str, Path],
    out_weights: Union[str, Path],
    seed: Optional[int] = None,
    epochs: Optional[int] = None,
    progress: bool = False,
    base_path: Optional[Path] = None,
) -> Dict[str, Any]:
    """Initialize, finetune and save a model.

    Args:
        data: Dataset file (records split into train/validation/test).
        config: Experiment YAML, or the name of a bundled config (``tiny``).
        out_weights: SGW1 manifest path; the blob is written next to it.
        seed: Overrides the config's training seed (also seeds initialization).
        epochs: Overrides the config's epoch count.
        progress: Show a progress bar.
        base_path: Optional base path for the data directory (for testing).

    Returns:
        Dictionary with either:
        - success: True, history, train_accuracy, validation_accuracy, weights_hash, outputs
        - success: False, error, error_kind
    """
    try:
        experiment, vocab, model_config, config_path = load_experiment(config, base_path)
        overrides = {}
        if seed is not None:
            overrides["seed"] = seed
        if epochs is not None:
            overrides["epochs"] = epochs
        try:
            train_config = TrainConfig.model_validate({**experiment.train.model_dump(), **overrides})
        except ValidationError as e:
            raise ConfigError(f"Invalid training override: {e}") from e

        manifest = start_manifest(
            "train",
            parameters={"data": str(data), "config": str(config_path)},
            seeds={"train": train_config.seed},
            configs={
                "model": model_config.model_dump(mode="json"),
                "train": train_config.model_dump(mode="json"),
                "vocab": list(vocab.tokens),
            },
            inputs=[data, config_path],
        )

        records = load_dataset(data, labels=model_config.labels)
        initial = init_weights(model_config, seed=train_config.seed)
        result = train(initial, records, Tokenizer(vocab), train_config, progress=progress)

        weights_manifest = save_weights(result.weights, out_weights, vocab)
        out_path = Path(out_weights)
        blob_path = out_path.parent / weights_manifest["blob"]
        manifest_file = close_manifest(manifest, [out_path, blob_path])

        return success_response(
            f"Trained for {len(result.history)} epochs",
            outputs=[out_path, blob_path, manifest_file],
            history=[asdict(stats) for stats in result.history],
            train_accuracy=result.final_train_accuracy,
            validation_accuracy=result.final_validation_accuracy,
            weights_hash=result.weights.content_hash(),
        )
    except Exception as e:
        logger.error(f"train failed: {e}")
        return exception_response(e)

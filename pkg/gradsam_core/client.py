"""High-level client interface for the Grad-SAM toolkit.

``GradSamClient`` wraps the dict-returning operations for scripts, and
exposes the in-memory objects (weights, tokenizer) for notebook use.
"""

from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Union

from gradsam_core.attribution.explain import explain
from gradsam_core.encoder.tokenizer import Tokenizer
from gradsam_core.models.results import AttributionResult
from gradsam_core.operations.common import load_model_bundle
from gradsam_core.operations.data import generate_data as generate_data_op
from gradsam_core.operations.evaluate import evaluate_model as evaluate_model_op
from gradsam_core.operations.explain import explain_inputs as explain_inputs_op
from gradsam_core.operations.report import render_attributions as render_attributions_op
from gradsam_core.operations.training import train_model as train_model_op
from gradsam_core.store.weights_io import WeightsBundle
from gradsam_core.utils.paths import list_tasks

PathLike = Union[str, Path]


class GradSamClient:
    """High-level client for corpus generation, training, explanation and evaluation.

    Example:
        >>> from gradsam_core import GradSamClient
        >>> client = GradSamClient()
        >>> "single_trigger" in client.list_tasks()  # doctest: +SKIP
        True
        >>> result = client.train("corpus.jsonl", "tiny", "model.json")  # doctest: +SKIP
        >>> result['success']  # doctest: +SKIP
        True
    """

    def __init__(self, data_dir: Optional[PathLike] = None):
        """Initialize a client.

        Args:
            data_dir: Base path whose ``data/`` folder holds the vocabulary,
                tasks and configs. Defaults to ``GRADSAM_DATA_DIR`` or the
                project's ``data/``.
        """
        self.data_dir = Path(data_dir) if data_dir else None

    def list_tasks(self) -> List[str]:
        """Names of the bundled synthetic task specs."""
        return list_tasks(self.data_dir)

    def generate_data(
        self, spec: PathLike, count: int, seed: int, out: PathLike, **kwargs: Any
    ) -> Dict[str, Any]:
        return generate_data_op(spec, count, seed, out, base_path=self.data_dir, **kwargs)

    def train(
        self, data: PathLike, config: PathLike, out_weights: PathLike, **kwargs: Any
    ) -> Dict[str, Any]:
        return train_model_op(data, config, out_weights, base_path=self.data_dir, **kwargs)

    def explain(self, weights: PathLike, method: str, **kwargs: Any) -> Dict[str, Any]:
        """Explain ``text=...`` or every sentence of ``data=...``; see ``explain_inputs``."""
        return explain_inputs_op(weights, method, **kwargs)

    def evaluate(
        self, weights: PathLike, data: PathLike, out: PathLike, **kwargs: Any
    ) -> Dict[str, Any]:
        return evaluate_model_op(weights, data, out, **kwargs)

    def report(self, attributions: Sequence[PathLike], out: PathLike, **kwargs: Any) -> Dict[str, Any]:
        return render_attributions_op(attributions, out, **kwargs)

    # In-memory access

    def load(self, weights: PathLike) -> "LoadedModel":
        """Weights and tokenizer for repeated in-process explanation.

        Raises:
            ConfigError, IntegrityError: If the weights cannot be loaded.
        """
        bundle, tokenizer = load_model_bundle(weights)
        return LoadedModel(bundle, tokenizer)


class LoadedModel:
    """A loaded model ready to explain raw text."""

    def __init__(self, bundle: WeightsBundle, tokenizer: Tokenizer):
        self.bundle = bundle
        self.weights = bundle.weights
        self.tokenizer = tokenizer

    def explain(
        self, text: str, method: str = "grad-sam", class_id: Optional[int] = None, **kwargs: Any
    ) -> AttributionResult:
        seq = self.tokenizer.encode(text, self.weights.config.N)
        if kwargs.get("k") is not None:
            kwargs.setdefault("vocab", self.tokenizer.vocab)
        result = explain(seq, self.weights, method, class_id, **kwargs)
        return result.model_copy(update={"text": text})

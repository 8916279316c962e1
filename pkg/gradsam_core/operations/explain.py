"""Explaining a sentence or every sentence of a dataset."""

import logging
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

from gradsam_core.attribution.explain import explain, parse_method
from gradsam_core.errors import ConfigError
from gradsam_core.models.config import GradientVariant, ImportanceAxis, MaskPolicy
from gradsam_core.models.results import AttributionResult
from gradsam_core.operations.common import load_model_bundle, parse_choice
from gradsam_core.store.datasets import load_dataset
from gradsam_core.store.reports import save_attributions
from gradsam_core.utils.responses import exception_response, success_response

logger = logging.getLogger(__name__)


def explain_inputs(
    weights: Union[str, Path],
    method: str,
    text: Optional[str] = None,
    data: Optional[Union[str, Path]] = None,
    class_id: Optional[int] = None,
    k: Optional[float] = None,
    split: Optional[str] = None,
    limit: Optional[int] = None,
    policy: str = MaskPolicy.REPLACE.value,
    variant: str = GradientVariant.NORM.value,
    axis: str = ImportanceAxis.ROW.value,
    out: Optional[Union[str, Path]] = None,
    vocab_path: Optional[Union[str, Path]] = None,
) -> Dict[str, Any]:
    """Rank tokens of ``text`` or of the sentences in ``data``.

    For dataset sentences of a multiclass model the gold class is explained;
    ``class_id`` applies to ``text`` only.

    Returns:
        Dictionary with either:
        - success: True, results (AttributionResult dicts), outputs
        - success: False, error, error_kind
    """
    try:
        if (text is None) == (data is None):
            raise ConfigError("Give exactly one of text or data")
        kind = parse_method(method)
        bundle, tokenizer = load_model_bundle(weights, vocab_path)
        model = bundle.weights
        N = model.config.N
        if k is not None and not 0 < k <= 1:
            raise ConfigError(f"k must lie in (0, 1], got {k}")
        if class_id is not None and model.config.n == 1:
            raise ConfigError("Binary models explain their single logit; omit the class")
        options = dict(
            k=k,
            vocab=tokenizer.vocab,
            policy=parse_choice(MaskPolicy, policy, "mask policy"),
            variant=parse_choice(GradientVariant, variant, "gradient variant"),
            axis=parse_choice(ImportanceAxis, axis, "importance axis"),
        )

        results: List[AttributionResult] = []
        if text is not None:
            result = explain(tokenizer.encode(text, N), model, kind, class_id, **options)
            results.append(result.model_copy(update={"text": text}))
        else:
            records = load_dataset(data, labels=model.config.labels)
            if split is not None:
                records = [r for r in records if r.split == split]
            if limit is not None:
                records = records[:limit]
            for record in records:
                gold = record.label if model.config.n > 1 else None
                result = explain(tokenizer.encode(record.text, N), model, kind, gold, **options)
                results.append(result.model_copy(update={"text": record.text, "record_id": record.id}))

        outputs = []
        if out is not None:
            outputs.append(save_attributions(results[0] if text is not None else results, out))
        logger.info(f"Explained {len(results)} sentences with {kind.value}")
        return success_response(
            f"Explained {len(results)} sentences with {kind.value}",
            outputs=outputs,
            results=[r.model_dump(mode="json") for r in results],
        )
    except Exception as e:
        logger.error(f"explain failed: {e}")
        return exception_response(e)

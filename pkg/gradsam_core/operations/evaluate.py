"""Faithfulness evaluation of saved weights on a dataset."""

import logging
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Union

from gradsam_core.attribution.explain import parse_methods
from gradsam_core.encoder.examples import encode_dataset
from gradsam_core.errors import ConfigError
from gradsam_core.evaluation.metrics import get_metric
from gradsam_core.evaluation.protocols import evaluate
from gradsam_core.models.config import MaskDirection, MaskPolicy
from gradsam_core.operations.common import close_manifest, load_model_bundle, parse_choice
from gradsam_core.store.datasets import load_dataset
from gradsam_core.store.hashing import sha256_file
from gradsam_core.store.manifest import start_manifest
from gradsam_core.store.reports import export_report_csv, save_report
from gradsam_core.utils.responses import exception_response, success_response

logger = logging.getLogger(__name__)

_DIRECTION_ALIASES = {
    "keep": [MaskDirection.KEEP_TOP_K],
    "keep-top": [MaskDirection.KEEP_TOP_K],
    "keep-top-k": [MaskDirection.KEEP_TOP_K],
    "mask": [MaskDirection.MASK_TOP_K],
    "mask-top": [MaskDirection.MASK_TOP_K],
    "mask-top-k": [MaskDirection.MASK_TOP_K],
    "both": [MaskDirection.KEEP_TOP_K, MaskDirection.MASK_TOP_K],
}


def parse_directions(value: Union[str, Sequence[str]]) -> List[MaskDirection]:
    """``keep``, ``mask-top``, ``both`` and friends; several may be comma-separated."""
    names = value.split(",") if isinstance(value, str) else list(value)
    directions: List[MaskDirection] = []
    for name in names:
        key = name.strip().lower()
        if key not in _DIRECTION_ALIASES:
            raise ConfigError(
                f"Unknown direction '{name}'. Must be one of: {', '.join(_DIRECTION_ALIASES)}"
            )
        for direction in _DIRECTION_ALIASES[key]:
            if direction not in directions:
                directions.append(direction)
    return directions


def parse_ks(values: Union[float, str, Sequence[float]]) -> List[float]:
    if isinstance(values, str):
        try:
            values = [float(v) for v in values.split(",") if v.strip()]
        except ValueError:
            raise ConfigError(f"k values must be numbers, got '{values}'") from None
    elif isinstance(values, (int, float)):
        values = [float(values)]
    ks = [float(k) for k in values]
    if not ks:
        raise ConfigError("No k values given")
    for k in ks:
        if not 0 < k <= 1:
            raise ConfigError(f"k must lie in (0, 1], got {k}")
    return ks


def evaluate_model(
    weights: Union[str, Path],
    data: Union[str, Path],
    out: Union[str, Path],
    methods: Union[str, Sequence[str]] = "all",
    ks: Union[float, str, Sequence[float]] = 0.2,
    direction: Union[str, Sequence[str]] = "both",
    policy: str = MaskPolicy.REPLACE.value,
    metric: str = "macro_f1",
    split: Optional[str] = "test",
    random_seeds: Sequence[int] = (),
    oracle: bool = False,
    workers: int = 1,
    csv_out: Optional[Union[str, Path]] = None,
    progress: bool = False,
    vocab_path: Optional[Union[str, Path]] = None,
) -> Dict[str, Any]:
    """Run the masking protocols and write an EvalReport.

    Args:
        weights: SGW1 manifest path.
        data: Dataset file.
        out: Report JSON path.
        methods: Method names, comma-separated, or ``all``.
        ks: One or more k fractions.
        direction: ``keep``, ``mask-top`` or ``both``.
        policy: ``replace`` or ``delete``.
        metric: ``macro_f1`` or ``accuracy``.
        split: Records of this split only; None for every record.
        random_seeds: One random-ranking baseline per seed.
        oracle: Add the gold-rationale ranking.
        workers: Threads across sentences.
        csv_out: Optional flat CSV export.

    Returns:
        Dictionary with either:
        - success: True, full_text_metric, rows (method/k/direction summaries), outputs
        - success: False, error, error_kind
    """
    try:
        method_kinds = parse_methods(methods)
        k_values = parse_ks(ks)
        directions = parse_directions(direction)
        mask_policy = parse_choice(MaskPolicy, policy, "mask policy")
        get_metric(metric)
        if workers < 1:
            raise ConfigError(f"workers must be at least 1, got {workers}")

        bundle, tokenizer = load_model_bundle(weights, vocab_path)
        model = bundle.weights
        records = load_dataset(data, labels=model.config.labels)
        if split is not None:
            available = sorted({r.split for r in records})
            records = [r for r in records if r.split == split]
            if not records:
                raise ConfigError(f"No records in split '{split}'; available: {', '.join(available)}")
        examples = encode_dataset(records, tokenizer, model.config.N)

        manifest = start_manifest(
            "evaluate",
            parameters={
                "methods": [m.value for m in method_kinds],
                "ks": k_values,
                "directions": [d.value for d in directions],
                "policy": mask_policy.value,
                "metric": metric,
                "split": split,
                "oracle": oracle,
            },
            seeds={f"random_{i}": s for i, s in enumerate(random_seeds)},
            configs={"model": model.config.model_dump(mode="json")},
            inputs=[weights, data],
        )

        report = evaluate(
            model,
            examples,
            tokenizer.vocab,
            method_kinds,
            ks=k_values,
            directions=directions,
            policy=mask_policy,
            metric=metric,
            random_seeds=random_seeds,
            oracle=oracle,
            workers=workers,
            corpus_id=sha256_file(data),
            split=split or "all",
            progress=progress,
        )
        out_path = Path(out)
        save_report(report, out_path)
        outputs = [out_path]
        if csv_out is not None:
            outputs.append(export_report_csv(report, csv_out))
        manifest_file = close_manifest(manifest, outputs)

        summary = [
            {
                "method": row.method,
                "k": row.k,
                "direction": row.direction.value,
                "seed": row.seed,
                metric: row.metric_value,
                "aopc": row.aopc,
            }
            for row in report.rows
        ]
        return success_response(
            f"Evaluated {len(method_kinds)} methods on {len(examples)} sentences",
            outputs=outputs + [manifest_file],
            full_text_metric=report.full_text_metric,
            rows=summary,
            recovery=[r.model_dump() for r in report.recovery],
        )
    except Exception as e:
        logger.error(f"evaluate failed: {e}")
        return exception_response(e)

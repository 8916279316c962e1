"""Masking protocols: keep-top-k metric, mask-top-k AOPC and the full sweep.

Sentences are independent; with ``workers > 1`` they run on a thread pool
sharing the immutable weights, and results are reduced in input order so
reports do not depend on scheduling.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, List, Optional, Sequence, TypeVar, Union

from tqdm import tqdm

from gradsam_core.encoder.examples import EncodedExample
from gradsam_core.encoder.model import predict
from gradsam_core.encoder.tokenizer import Vocab
from gradsam_core.encoder.weights import EncoderWeights
from gradsam_core.errors import ContractError, EvaluationError, GradSamError
from gradsam_core.evaluation.masking import mask_by_ranking
from gradsam_core.evaluation.metrics import get_metric
from gradsam_core.evaluation.rankers import MethodRanker, OracleRanker, RandomRanker, Ranker
from gradsam_core.evaluation.recovery import recovery_from_rankings
from gradsam_core.models.config import (
    MaskDirection,
    MaskingSpec,
    MaskPolicy,
    MethodKind,
)
from gradsam_core.models.results import EvalReport, EvalRow, SentenceRecord

logger = logging.getLogger(__name__)

T = TypeVar("T")


def _per_sentence(
    fn: Callable[[int, EncodedExample], T],
    examples: Sequence[EncodedExample],
    workers: int = 1,
    desc: str = "",
    progress: bool = False,
) -> List[T]:
    """Apply ``fn`` to every example in order; failures name the sentence."""

    def guarded(index: int) -> T:
        example = examples[index]
        try:
            return fn(index, example)
        except EvaluationError:
            raise
        except GradSamError as e:
            raise EvaluationError(str(e), example.id) from e

    indices = range(len(examples))
    if workers <= 1:
        return [guarded(i) for i in tqdm(indices, desc=desc, disable=not progress)]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(tqdm(pool.map(guarded, indices), total=len(examples), desc=desc, disable=not progress))


def full_predictions(
    weights: EncoderWeights, examples: Sequence[EncodedExample], workers: int = 1
) -> List[int]:
    return _per_sentence(lambda _, ex: predict(ex.sequence, weights), examples, workers, "predict")


def compute_rankings(
    ranker: Ranker,
    examples: Sequence[EncodedExample],
    workers: int = 1,
    progress: bool = False,
) -> List[List[int]]:
    return _per_sentence(lambda _, ex: ranker.rank(ex), examples, workers, ranker.name, progress)


def score_masked(
    weights: EncoderWeights,
    examples: Sequence[EncodedExample],
    rankings: Sequence[Sequence[int]],
    full: Sequence[int],
    spec: MaskingSpec,
    vocab: Vocab,
    method: str,
    seed: Optional[int] = None,
    metric: str = "macro_f1",
    workers: int = 1,
) -> EvalRow:
    """Mask every sentence by its ranking, re-predict and aggregate one row."""
    metric_fn = get_metric(metric)
    labels = weights.config.labels

    def run(index: int, example: EncodedExample) -> SentenceRecord:
        masked_seq, kept, masked = mask_by_ranking(example.sequence, rankings[index], spec, vocab)
        return SentenceRecord(
            record_id=example.id,
            gold=example.label,
            prediction_full=full[index],
            prediction_masked=predict(masked_seq, weights),
            kept=kept,
            masked=masked,
        )

    records = _per_sentence(run, examples, workers)
    golds = [r.gold for r in records]
    return EvalRow(
        method=method,
        k=spec.k,
        direction=spec.direction,
        seed=seed,
        metric_value=metric_fn([r.prediction_masked for r in records], golds, labels),
        full_metric=metric_fn([r.prediction_full for r in records], golds, labels),
        records=records,
    )


def recompute_row(row: EvalRow, metric: str, labels: Sequence[int]) -> EvalRow:
    """Aggregates of ``row`` rebuilt from its per-sentence records alone."""
    metric_fn = get_metric(metric)
    golds = [r.gold for r in row.records]
    return row.model_copy(
        update={
            "metric_value": metric_fn([r.prediction_masked for r in row.records], golds, labels),
            "full_metric": metric_fn([r.prediction_full for r in row.records], golds, labels),
        }
    )


def _as_ranker(weights: EncoderWeights, ranker: Union[Ranker, MethodKind, str]) -> Ranker:
    if isinstance(ranker, Ranker):
        return ranker
    return MethodRanker(weights, MethodKind(ranker))


def _single_direction(
    weights: EncoderWeights,
    examples: Sequence[EncodedExample],
    ranker: Union[Ranker, MethodKind, str],
    spec: MaskingSpec,
    vocab: Vocab,
    metric: str,
    workers: int,
) -> EvalRow:
    if not examples:
        raise EvaluationError("No sentences to evaluate")
    ranker = _as_ranker(weights, ranker)
    full = full_predictions(weights, examples, workers)
    rankings = compute_rankings(ranker, examples, workers)
    return score_masked(
        weights, examples, rankings, full, spec, vocab, ranker.name, ranker.seed, metric, workers
    )


def masked_eval(
    weights: EncoderWeights,
    examples: Sequence[EncodedExample],
    ranker: Union[Ranker, MethodKind, str],
    spec: MaskingSpec,
    vocab: Vocab,
    metric: str = "macro_f1",
    workers: int = 1,
) -> EvalRow:
    """Keep the top-k ranked tokens, mask the rest and score the predictions.

    The row also carries the unmasked reference metric.
    """
    if spec.direction != MaskDirection.KEEP_TOP_K:
        raise ContractError("masked_eval needs a keep-top-k masking spec")
    return _single_direction(weights, examples, ranker, spec, vocab, metric, workers)


def aopc_eval(
    weights: EncoderWeights,
    examples: Sequence[EncodedExample],
    ranker: Union[Ranker, MethodKind, str],
    spec: MaskingSpec,
    vocab: Vocab,
    metric: str = "macro_f1",
    workers: int = 1,
) -> EvalRow:
    """Mask the top-k ranked tokens; ``row.aopc`` is the metric drop (higher is better)."""
    if spec.direction != MaskDirection.MASK_TOP_K:
        raise ContractError("aopc_eval needs a mask-top-k masking spec")
    return _single_direction(weights, examples, ranker, spec, vocab, metric, workers)


def evaluate(
    weights: EncoderWeights,
    examples: Sequence[EncodedExample],
    vocab: Vocab,
    methods: Iterable[MethodKind],
    ks: Sequence[float] = (0.2,),
    directions: Sequence[MaskDirection] = (MaskDirection.KEEP_TOP_K, MaskDirection.MASK_TOP_K),
    policy: MaskPolicy = MaskPolicy.REPLACE,
    metric: str = "macro_f1",
    random_seeds: Sequence[int] = (),
    oracle: bool = False,
    workers: int = 1,
    corpus_id: str = "",
    split: str = "test",
    progress: bool = False,
) -> EvalReport:
    """Every (ranker, k, direction) cell over one set of sentences.

    Each ranker ranks every sentence once; the ranking is reused across k
    and both directions. Random baselines contribute one row per seed.
    Gold-rationale recovery is reported for every ranker when the sentences
    carry rationales, once over all classes and once per gold class.

    Raises:
        EvaluationError: If there are no sentences, or a sentence fails (the
            message names it).
    """
    if not examples:
        raise EvaluationError("No sentences to evaluate")
    get_metric(metric)
    specs = [MaskingSpec(k=k, direction=d, policy=policy) for k in ks for d in directions]

    rankers: List[Ranker] = [MethodRanker(weights, m) for m in methods]
    rankers += [RandomRanker(seed) for seed in random_seeds]
    if oracle:
        rankers.append(OracleRanker())

    full = full_predictions(weights, examples, workers)
    labels = weights.config.labels
    golds = [ex.label for ex in examples]
    full_metric = get_metric(metric)(full, golds, labels)
    logger.info(f"Full-text {metric} on {len(examples)} sentences: {full_metric:.4f}")

    has_rationales = any(ex.gold_positions for ex in examples)
    rows: List[EvalRow] = []
    recovery = []
    for ranker in rankers:
        rankings = compute_rankings(ranker, examples, workers, progress)
        for spec in specs:
            row = score_masked(
                weights, examples, rankings, full, spec, vocab, ranker.name, ranker.seed, metric, workers
            )
            rows.append(row)
            suffix = f" (aopc {row.aopc:.4f})" if row.aopc is not None else ""
            logger.info(
                f"{ranker.name} k={spec.k} {spec.direction.value}: {metric}={row.metric_value:.4f}{suffix}"
            )
        if has_rationales and not isinstance(ranker, RandomRanker):
            recovery.append(recovery_from_rankings(ranker.name, rankings, full, examples))
            recovery += [
                recovery_from_rankings(ranker.name, rankings, full, examples, label=label)
                for label in labels
            ]

    return EvalReport(
        corpus_id=corpus_id,
        model_hash=weights.content_hash(),
        split=split,
        metric=metric,
        mask_policy=policy,
        labels=labels,
        full_text_metric=full_metric,
        rows=rows,
        recovery=recovery,
    )

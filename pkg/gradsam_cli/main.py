"""``gradsam`` command line.

Subcommands: gen-data, train, explain, evaluate, report, verify. Exit
status is 0 on success, 2 for configuration or usage errors and 1 for
runtime failures.
"""

import argparse
import json
import logging
import sys
from typing import Any, Dict, List, Optional

from gradsam_core import __version__
from gradsam_core.errors import GradSamError
from gradsam_core.models.config import GradientVariant, ImportanceAxis, MaskPolicy
from gradsam_core.operations import (
    evaluate_model,
    explain_inputs,
    generate_data,
    render_attributions,
    train_model,
)
from gradsam_core.store.manifest import verify_manifest
from gradsam_core.utils.responses import CONFIG_ERROR, exception_response, success_response

logger = logging.getLogger("gradsam_cli")

EXIT_OK = 0
EXIT_RUNTIME = 1
EXIT_CONFIG = 2


def configure_logging(verbose: bool = False, quiet: bool = False) -> None:
    level = logging.DEBUG if verbose else logging.WARNING if quiet else logging.INFO
    logging.basicConfig(
        level=level,
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        stream=sys.stderr,
        force=True,
    )


def _seeds(value: str) -> List[int]:
    try:
        return [int(v) for v in value.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"seeds must be comma-separated integers, got '{value}'")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gradsam",
        description="Gradient-weighted self-attention token attribution on a desk-scale encoder",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--verbose", action="store_true", help="Debug logging")
    parser.add_argument("--quiet", action="store_true", help="Warnings and errors only")
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen-data", help="Generate a planted-trigger corpus")
    gen.add_argument("--spec", required=True, help="Task YAML, or a bundled task name")
    gen.add_argument("--count", type=int, required=True)
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--out", required=True, help="Output .jsonl or .csv")
    gen.add_argument("--vocab", help="Vocabulary file (default: bundled)")

    train = sub.add_parser("train", help="Finetune a model on a dataset")
    train.add_argument("--data", required=True)
    train.add_argument("--config", required=True, help="Experiment YAML, or a bundled config name")
    train.add_argument("--out-weights", required=True, help="SGW1 manifest path (.json)")
    train.add_argument("--seed", type=int)
    train.add_argument("--epochs", type=int)
    train.add_argument("--progress", action="store_true")

    explain = sub.add_parser("explain", help="Rank the tokens of a sentence or dataset")
    explain.add_argument("--weights", required=True)
    source = explain.add_mutually_exclusive_group(required=True)
    source.add_argument("--text")
    source.add_argument("--data")
    explain.add_argument("--method", required=True, help="One of the seven ranking methods")
    explain.add_argument("--class", dest="class_id", type=int, help="Class to explain (multiclass)")
    explain.add_argument("--k", type=float, help="Also report the top-k tokens and the kept-only prediction")
    explain.add_argument("--split", help="Dataset split to explain")
    explain.add_argument("--limit", type=int)
    explain.add_argument("--policy", default=MaskPolicy.REPLACE.value, help="replace | delete")
    explain.add_argument("--variant", default=GradientVariant.NORM.value, help="norm | dot (gradient method)")
    explain.add_argument("--axis", default=ImportanceAxis.ROW.value, help="row | column")
    explain.add_argument("--out", help="Write AttributionResult JSON here (default: stdout)")
    explain.add_argument("--vocab")

    evaluate = sub.add_parser("evaluate", help="Masking faithfulness evaluation")
    evaluate.add_argument("--weights", required=True)
    evaluate.add_argument("--data", required=True)
    evaluate.add_argument("--methods", default="all", help="Comma-separated method names, or all")
    evaluate.add_argument("--k", default="0.2", help="One or more comma-separated fractions")
    evaluate.add_argument("--direction", default="both", help="keep | mask-top | both")
    evaluate.add_argument("--policy", default=MaskPolicy.REPLACE.value, help="replace | delete")
    evaluate.add_argument("--metric", default="macro_f1", help="macro_f1 | accuracy")
    evaluate.add_argument("--split", default="test", help="Split to evaluate, or 'all'")
    evaluate.add_argument("--random-seeds", type=_seeds, default=[], help="Random baseline seeds, e.g. 0,1,2,3,4")
    evaluate.add_argument("--oracle", action="store_true", help="Add the gold-rationale ranking")
    evaluate.add_argument("--workers", type=int, default=1)
    evaluate.add_argument("--out", required=True, help="Report JSON path")
    evaluate.add_argument("--csv", dest="csv_out", help="Also write a flat CSV")
    evaluate.add_argument("--progress", action="store_true")
    evaluate.add_argument("--vocab")

    report = sub.add_parser("report", help="Static HTML token-highlight report")
    report.add_argument("--attributions", nargs="+", required=True)
    report.add_argument("--out", required=True)
    report.add_argument("--title", default="Token importance")

    verify = sub.add_parser("verify", help="Re-hash the files a run manifest records")
    verify.add_argument("--manifest", required=True)

    return parser


def _verify(manifest: str) -> Dict[str, Any]:
    try:
        verify_manifest(manifest)
        return success_response(f"Manifest {manifest} verified", outputs=[])
    except GradSamError as e:
        return exception_response(e)


def dispatch(args: argparse.Namespace) -> Dict[str, Any]:
    if args.command == "gen-data":
        return generate_data(args.spec, args.count, args.seed, args.out, vocab_path=args.vocab)
    if args.command == "train":
        return train_model(
            args.data, args.config, args.out_weights,
            seed=args.seed, epochs=args.epochs, progress=args.progress,
        )
    if args.command == "explain":
        return explain_inputs(
            args.weights,
            args.method,
            text=args.text,
            data=args.data,
            class_id=args.class_id,
            k=args.k,
            split=args.split,
            limit=args.limit,
            policy=args.policy,
            variant=args.variant,
            axis=args.axis,
            out=args.out,
            vocab_path=args.vocab,
        )
    if args.command == "evaluate":
        return evaluate_model(
            args.weights,
            args.data,
            args.out,
            methods=args.methods,
            ks=args.k,
            direction=args.direction,
            policy=args.policy,
            metric=args.metric,
            split=None if args.split == "all" else args.split,
            random_seeds=args.random_seeds,
            oracle=args.oracle,
            workers=args.workers,
            csv_out=args.csv_out,
            progress=args.progress,
            vocab_path=args.vocab,
        )
    if args.command == "report":
        return render_attributions(args.attributions, args.out, title=args.title)
    return _verify(args.manifest)


def _emit(args: argparse.Namespace, result: Dict[str, Any]) -> None:
    if args.command == "explain" and not args.out:
        results = result["results"]
        payload = results[0] if args.text is not None else results
        print(json.dumps(payload, indent=2, ensure_ascii=False))
        return
    print(result["message"])
    for output in result.get("outputs", []):
        print(f"  wrote {output}")


def main(argv: Optional[List[str]] = None) -> int:
    """Entry point; returns the process exit status."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        # argparse exits 0 for --help/--version and 2 for usage errors
        return int(e.code) if isinstance(e.code, int) else EXIT_CONFIG
    configure_logging(args.verbose, args.quiet)

    logger.debug(f"Running {args.command}")
    try:
        result = dispatch(args)
    except Exception as e:
        logger.exception(f"{args.command} crashed")
        result = exception_response(e)

    if not result.get("success"):
        print(f"error: {result['message']}", file=sys.stderr)
        return EXIT_CONFIG if result.get("error_kind") == CONFIG_ERROR else EXIT_RUNTIME
    _emit(args, result)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())

"""Command-line entry point: dataset examples, adjust, matrix, report."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Sequence

from .dataset import example_dataset, save_dataset
from .errors import BackendError, ConflictError, ContractError, DatasetError, QStratError, ReportError
from .matrix import run_matrix, write_matrix
from .orchestrator import AdjustOptions, adjust
from .report import write_report

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2
EXIT_DATASET = 3
EXIT_BACKEND = 4
EXIT_CONFLICT = 5


_EXIT_CODES: tuple[tuple[type[QStratError], int], ...] = (
    (DatasetError, EXIT_DATASET),
    (ReportError, EXIT_DATASET),
    (BackendError, EXIT_BACKEND),
    (ConflictError, EXIT_CONFLICT),
    (ContractError, EXIT_USAGE),
)


def exit_code(exc: QStratError) -> int:
    return next((code for cls, code in _EXIT_CODES if isinstance(exc, cls)), EXIT_FAILURE)


def _weights(text: str) -> dict[str, float]:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise argparse.ArgumentTypeError(f"invalid JSON: {exc.msg}") from exc
    if not isinstance(doc, dict) or not all(
        isinstance(v, (int, float)) and not isinstance(v, bool) for v in doc.values()
    ):
        raise argparse.ArgumentTypeError("weights must be a JSON object of numbers")
    return {str(k): float(v) for k, v in doc.items()}


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def _run_options(p: argparse.ArgumentParser) -> None:
    p.add_argument("--execute", action="store_true", help="sample the compiled circuits on the noisy simulator")
    p.add_argument("--shots", type=_positive_int, default=1024)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--search", choices=("grid", "bandit"), default="grid")
    p.add_argument("--pareto", action="store_true", help="restrict selection to the non-dominated set")
    p.add_argument("--max-candidates", type=_positive_int, default=24)
    p.add_argument("--weights", type=_weights, default=None, help='JSON object, e.g. \'{"depth": 1.0}\'')
    p.add_argument("--noiseless", action="store_true", help="execute without gate or readout noise")
    p.add_argument("--alpha", type=float, default=1.0, help="surrogate prior precision")
    p.add_argument("--sigma", type=float, default=1.0, help="surrogate observation noise")
    p.add_argument(
        "--fixed-compile-time", type=float, default=None, metavar="SECONDS",
        help="record this compile time instead of measuring it (makes output byte-reproducible)",
    )
    p.add_argument("--overwrite", action="store_true")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qstrat", description="Per-circuit compilation strategy selection.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    ds = sub.add_parser("dataset", help="dataset utilities")
    ds_sub = ds.add_subparsers(dest="dataset_command", required=True)
    ex = ds_sub.add_parser("examples", help="write the bundled example dataset")
    ex.add_argument("--out", required=True)
    ex.add_argument("--overwrite", action="store_true")

    adj = sub.add_parser("adjust", help="select a strategy for every circuit in a dataset")
    adj.add_argument("dataset")
    adj.add_argument("--backend", required=True)
    adj.add_argument("--out", required=True)
    _run_options(adj)

    mat = sub.add_parser("matrix", help="adjust against several backends into one JSON document")
    mat.add_argument("dataset")
    mat.add_argument("--backend", required=True, nargs="+", action="extend")
    mat.add_argument("--out", required=True)
    _run_options(mat)

    rep = sub.add_parser("report", help="render a matrix document as Markdown (and HTML)")
    rep.add_argument("matrix")
    rep.add_argument("--out", required=True)
    rep.add_argument("--html", action="store_true")
    rep.add_argument("--overwrite", action="store_true")
    return parser


def _options(args: argparse.Namespace) -> AdjustOptions:
    return AdjustOptions(
        search=args.search,
        pareto=args.pareto,
        max_candidates=args.max_candidates,
        weights=args.weights,
        execute=args.execute,
        shots=args.shots,
        seed=args.seed,
        noisy=not args.noiseless,
        alpha=args.alpha,
        sigma=args.sigma,
        fixed_compile_time=args.fixed_compile_time,
    )


def _dispatch(args: argparse.Namespace) -> int:
    if args.command == "dataset":
        index = save_dataset(example_dataset(), args.out, overwrite=args.overwrite)
        print(f"wrote {len(index.entries)} circuits to {args.out}")
    elif args.command == "adjust":
        w = adjust(args.dataset, args.backend, args.out, _options(args), overwrite=args.overwrite)
        for rec in w.selections:
            print(f"{rec.circuit}: {rec.selected.label} ({rec.evaluated} evaluated)")
        print(f"workload written to {args.out}")
    elif args.command == "matrix":
        if Path(args.out).exists() and not args.overwrite:
            raise ConflictError(f"{args.out} already exists; pass --overwrite to replace it")
        report = run_matrix(args.dataset, args.backend, _options(args))
        write_matrix(report, args.out, overwrite=args.overwrite)
        failed = [c["backend_spec"] for c in report.columns if c["status"] != "ok"]
        print(f"{len(report.cells)} cells written to {args.out}" + (f"; failed backends: {failed}" if failed else ""))
    elif args.command == "report":
        for path in write_report(args.matrix, args.out, html_output=args.html, overwrite=args.overwrite):
            print(f"wrote {path}")
    return EXIT_OK


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return _dispatch(args)
    except QStratError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exit_code(exc)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFLICT


if __name__ == "__main__":
    sys.exit(main())

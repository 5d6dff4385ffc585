"""Command-line interface.

    segalign eval  --gt GT --pred PRED [--format csv|jsonl] [--c0 2.0] [--eps 1.0]
                   [--span auto|BEGIN,END] [--nl NL] [--output json|text] [--fill auto|off]
    segalign batch MANIFEST [--jobs N] [same options as eval]
    segalign synth --gt GT --out PRED [--seed 0] [--jitter 0] [--drops 0] ...

Exit codes: 0 success, 1 input error, 2 internal error.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import List, Optional

from .evaluation import EmptyMatrix, UnknownLabel
from .io import FORMATS, InputError, infer_format, parse_sequence_file, write_sequence_file
from .model import InvalidSequence, SpanTooSmall, validate_sequence
from .report import EvaluationConfig, emit_report, run_evaluation
from .synth import InfeasibleSpec, PerturbationSpec, perturb

EXIT_OK, EXIT_INPUT, EXIT_INTERNAL = 0, 1, 2

_INPUT_ERRORS = (InputError, InvalidSequence, SpanTooSmall, UnknownLabel, EmptyMatrix, InfeasibleSpec)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _span(value: str):
    if value == "auto":
        return None
    try:
        begin, end = (float(x) for x in value.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected 'auto' or 'BEGIN,END', got {value!r}") from None
    if begin > end:
        raise argparse.ArgumentTypeError(f"span begin {begin} > end {end}")
    return (begin, end)


def _add_eval_options(p: argparse.ArgumentParser) -> None:
    p.add_argument("--format", choices=FORMATS, default=None,
                   help="input file format (default: from file suffix)")
    p.add_argument("--c0", type=float, default=2.0, help="insertion/deletion cost (default 2.0)")
    p.add_argument("--eps", type=float, default=1.0,
                   help="time resolution for NL gap filling (default 1.0; 0 for continuous time)")
    p.add_argument("--span", type=_span, default=None, metavar="auto|BEGIN,END",
                   help="stream span used for NL filling (default: auto, covering both sequences)")
    p.add_argument("--nl", default="NL", help="label string meaning 'no label' (default NL)")
    p.add_argument("--output", choices=("json", "text"), default="json")
    p.add_argument("--fill", choices=("auto", "off"), default="auto",
                   help="off expects the files to carry their own NL segments")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="segalign", description="Align and score labeled time segments.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    ev = sub.add_parser("eval", help="evaluate one prediction file against ground truth")
    ev.add_argument("--gt", required=True, type=Path)
    ev.add_argument("--pred", required=True, type=Path)
    _add_eval_options(ev)

    batch = sub.add_parser("batch", help="evaluate every pair listed in a CSV manifest (name,gt,pred)")
    batch.add_argument("manifest", type=Path)
    batch.add_argument("--jobs", type=int, default=1, help="worker processes (default 1)")
    _add_eval_options(batch)

    syn = sub.add_parser("synth", help="write a prediction with planted errors derived from ground truth")
    syn.add_argument("--gt", required=True, type=Path)
    syn.add_argument("--out", required=True, type=Path)
    syn.add_argument("--format", choices=FORMATS, default=None)
    syn.add_argument("--nl", default="NL")
    syn.add_argument("--seed", type=int, default=0)
    syn.add_argument("--jitter", type=float, default=0.0)
    syn.add_argument("--swaps", type=int, default=0)
    syn.add_argument("--drops", type=int, default=0)
    syn.add_argument("--spurious", type=int, default=0)
    syn.add_argument("--repetitions", type=int, default=0)
    return parser


def _config(args) -> EvaluationConfig:
    try:
        return EvaluationConfig(c0=args.c0, eps=args.eps, span=args.span, nl=args.nl, fill=args.fill)
    except ValueError as exc:
        raise InputError(str(exc)) from exc


def _cmd_eval(args) -> int:
    report = run_evaluation(args.gt, args.pred, _config(args), args.format)
    sys.stdout.buffer.write(emit_report(report, args.output))
    return EXIT_OK


def _read_manifest(path: Path):
    base = path.parent
    try:
        with path.open(newline="", encoding="utf-8") as fh:
            rows = list(csv.DictReader(fh))
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror or exc}") from exc
    pairs = []
    for line, row in enumerate(rows, start=2):
        if not row.get("gt") or not row.get("pred"):
            raise InputError(f"{path}:{line}: manifest rows need gt and pred columns")
        name = row.get("name") or f"pair{line - 1}"
        pairs.append((name, base / row["gt"], base / row["pred"]))
    return pairs


def _evaluate_pair(job):
    name, gt, pred, config, fmt = job
    try:
        return name, run_evaluation(gt, pred, config, fmt), None
    except _INPUT_ERRORS as exc:
        return name, None, str(exc)


def _cmd_batch(args) -> int:
    config = _config(args)
    jobs = [(name, gt, pred, config, args.format) for name, gt, pred in _read_manifest(args.manifest)]
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(_evaluate_pair, jobs))
    else:
        results = [_evaluate_pair(j) for j in jobs]
    failures = [(name, err) for name, _, err in results if err is not None]
    if failures:
        for name, err in failures:
            print(f"segalign: {name}: {err}", file=sys.stderr)
        return EXIT_INPUT
    if args.output == "json":
        out = "".join(
            json.dumps({"name": name, "report": report.to_dict()}, allow_nan=False) + "\n"
            for name, report, _ in results
        )
        sys.stdout.write(out)
    else:
        for name, report, _ in results:
            sys.stdout.write(f"== {name} ==\n")
            sys.stdout.buffer.write(emit_report(report, "text"))
            sys.stdout.write("\n")
    return EXIT_OK


def _cmd_synth(args) -> int:
    fmt = args.format or infer_format(args.gt)
    gt = validate_sequence(parse_sequence_file(args.gt, fmt, args.nl))
    try:
        spec = PerturbationSpec(
            seed=args.seed, boundary_jitter=args.jitter, n_label_swaps=args.swaps,
            n_drops=args.drops, n_spurious=args.spurious, n_repetitions=args.repetitions,
        )
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    result = perturb(gt, spec)
    write_sequence_file(args.out, result.sequence, args.format or infer_format(args.out), args.nl)
    summary = {
        "dropped": list(result.dropped),
        "swapped": list(result.swapped),
        "repeated": list(result.repeated),
        "spurious": len(result.spurious),
        "expected": {
            "false_negatives": result.expected_false_negatives,
            "false_positives": result.expected_false_positives,
            "substitutions": result.expected_substitutions,
            "repetitions": result.expected_repetitions,
        },
    }
    print(json.dumps(summary))
    return EXIT_OK


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    handler = {"eval": _cmd_eval, "batch": _cmd_batch, "synth": _cmd_synth}[args.command]
    try:
        return handler(args)
    except _INPUT_ERRORS as exc:
        print(f"segalign: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except Exception as exc:  # noqa: BLE001
        print(f"segalign: internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())

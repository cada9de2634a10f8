"""Command line entry point: ``optcut solve | export | bench``."""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import os
import sys

from .continuous import SmoothConfig, solve_continuous
from .data import InstanceSpec, demo_table1, read_csv
from .errors import CapacityError, NumericError, ParseError
from .experiments import (METHODS, BenchmarkConfig, emit_detail_csv, emit_summary_csv,
                          format_table, run_benchmark, solve_median)
from .grid_search import DEFAULT_BUDGET, solve_exact_count, solve_exact_subset, solve_min_range
from .greedy import BEST, FIRST, solve_greedy
from .model_export import export_model

EXIT_USAGE = 2
EXIT_CAPACITY = 3
EXIT_NUMERIC = 4

SOLVE_METHODS = ("median", "greedy", "exact", "subset-exact", "range", "continuous")
REPORT_FIELDS = ("method", "cutoff_values", "cutoff_indices", "bucket_counts",
                 "distinguishability", "objective", "iterations", "evaluations", "elapsed_ms")


class UsageError(Exception):
    pass


def _load(args):
    if args.demo:
        return demo_table1()
    try:
        return read_csv(args.input)
    except FileNotFoundError:
        raise UsageError(f"input file not found: {args.input}") from None
    except ParseError as exc:
        raise UsageError(f"{args.input}: {exc}") from None


def _solve(S, args):
    if args.method == "median":
        return solve_median(S)
    if args.method == "greedy":
        return solve_greedy(S, BEST if args.mode == "best" else FIRST)
    if args.method == "exact":
        return solve_exact_count(S, args.budget)
    if args.method == "subset-exact":
        return solve_exact_subset(S, args.budget)
    if args.method == "range":
        return solve_min_range(S, args.budget)
    return solve_continuous(S, SmoothConfig(r=args.r))


def _report_csv(d: dict) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(REPORT_FIELDS)
    row = []
    for key in REPORT_FIELDS:
        v = d[key]
        if isinstance(v, list):
            v = json.dumps(v)
        elif isinstance(v, float):
            v = f"{v:.6g}"
        row.append(v)
    w.writerow(row)
    return buf.getvalue()


def _write(text, path):
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def cmd_solve(args):
    S = _load(args)
    rep = _solve(S, args)
    d = rep.to_dict()
    if args.output == "json":
        text = json.dumps(d, indent=2) + "\n"
    else:
        text = _report_csv(d)
    _write(text, args.out)


def cmd_export(args):
    S = _load(args)
    _write(export_model(S, args.formulation), args.out)


def cmd_bench(args):
    methods = tuple(m for part in args.methods for m in part.split(",") if m)
    try:
        spec = InstanceSpec(n=args.n, m=args.m, seed=args.seed)
        config = BenchmarkConfig(instances=args.instances, spec=spec, methods=methods,
                                 jobs=args.jobs, budget=args.budget,
                                 smooth=SmoothConfig(r=args.r))
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    summary = run_benchmark(config)
    os.makedirs(args.out_dir, exist_ok=True)
    _write(emit_summary_csv(summary), os.path.join(args.out_dir, "summary.csv"))
    _write(emit_detail_csv(summary), os.path.join(args.out_dir, "instances.csv"))
    print(format_table(summary))
    if summary.n_excluded:
        msg = f"{summary.n_excluded} instance(s) excluded by solver capacity limits"
        if args.strict:
            raise CapacityError(msg)
        print(msg, file=sys.stderr)


def _add_input(p):
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--input", metavar="CSV", help="score table (optional header, optional id column)")
    src.add_argument("--demo", action="store_true", help="use the bundled 50-item example")


def build_parser():
    parser = argparse.ArgumentParser(prog="optcut", description="Optimal per-score cut-offs.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="find cut-offs for one dataset")
    _add_input(p)
    p.add_argument("--method", choices=SOLVE_METHODS, required=True)
    p.add_argument("--mode", choices=("best", "first"), default="best",
                   help="greedy move acceptance (default: best)")
    p.add_argument("--r", type=float, default=5.0, help="logistic sharpness for --method continuous")
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET,
                   help="maximum grid points for exhaustive methods")
    p.add_argument("--output", choices=("json", "csv"), default="json")
    p.add_argument("--out", help="output path (default: stdout)")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("export", help="write the IQP or range ILP in LP format")
    _add_input(p)
    p.add_argument("--formulation", choices=("iqp", "ilp"), required=True)
    p.add_argument("--out", help="output path (default: stdout)")
    p.set_defaults(func=cmd_export)

    p = sub.add_parser("bench", help="run every method over random instances")
    p.add_argument("--instances", type=int, default=100)
    p.add_argument("--n", type=int, default=100)
    p.add_argument("--m", type=int, default=3)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--methods", nargs="+", default=[",".join(METHODS)],
                   help=f"subset of {', '.join(METHODS)} (exact_count is always run)")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--r", type=float, default=5.0)
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    p.add_argument("--out-dir", required=True)
    p.add_argument("--strict", action="store_true",
                   help="exit 3 if any instance exceeds the solver budget")
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        args.func(args)
    except UsageError as exc:
        print(f"optcut: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except CapacityError as exc:
        print(f"optcut: capacity error: {exc}", file=sys.stderr)
        return EXIT_CAPACITY
    except NumericError as exc:
        print(f"optcut: numeric error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (ValueError, OSError) as exc:
        print(f"optcut: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return 0


if __name__ == "__main__":
    sys.exit(main())

"""Benchmark harness: all methods over a seeded ensemble, scored against the optimum."""
from __future__ import annotations

import csv
import io
import json
import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .continuous import SmoothConfig, solve_continuous
from .core import ScoreMatrix, evaluate_cutoffs, median_cutoffs, snap_to_indices
from .data import InstanceSpec, generate_instance
from .errors import CapacityError
from .grid_search import (DEFAULT_BUDGET, SolveReport, format_cutoff, solve_exact_count,
                          solve_min_range)
from .greedy import solve_greedy

log = logging.getLogger(__name__)

METHODS = ("median", "greedy", "min_range", "continuous", "exact_count")
SUMMARY_COLUMNS = ("method", "min", "q1", "median", "q3", "max", "mean", "n_instances", "n_excluded")
DETAIL_COLUMNS = ("instance_index", "seed", "method", "d", "objective", "cutoffs", "elapsed_ms")


def solve_median(S) -> SolveReport:
    t0 = time.perf_counter()
    c = median_cutoffs(S)
    h, d = evaluate_cutoffs(S, c)
    rep = SolveReport("median", snap_to_indices(S, c), c, tuple(int(x) for x in h), d,
                      float(h @ h), iterations=0, evaluations=1)
    rep.elapsed = time.perf_counter() - t0
    return rep


def run_method(S, method, budget=DEFAULT_BUDGET, smooth=SmoothConfig()) -> SolveReport:
    if method == "median":
        return solve_median(S)
    if method == "greedy":
        return solve_greedy(S)
    if method == "min_range":
        return solve_min_range(S, budget)
    if method == "exact_count":
        return solve_exact_count(S, budget)
    if method == "continuous":
        return solve_continuous(S, smooth)
    raise ValueError(f"unknown method {method!r}")


@dataclass
class BenchmarkConfig:
    instances: int = 100
    spec: InstanceSpec = field(default_factory=InstanceSpec)
    methods: tuple = METHODS
    jobs: int = 1
    budget: int = DEFAULT_BUDGET
    smooth: SmoothConfig = field(default_factory=SmoothConfig)
    dataset: ScoreMatrix | None = None

    def __post_init__(self):
        methods = tuple(self.methods)
        unknown = set(methods) - set(METHODS)
        if unknown:
            raise ValueError(f"unknown methods {sorted(unknown)}")
        if "exact_count" not in methods:
            methods += ("exact_count",)
        # fixed order keeps output files stable
        self.methods = tuple(m for m in METHODS if m in methods)
        if self.instances < 1 or self.jobs < 1:
            raise ValueError("instances and jobs must be positive")


@dataclass
class InstanceResult:
    index: int
    seed: int
    reports: dict = field(default_factory=dict)
    error: str | None = None

    def ratio(self, method) -> float:
        exact = self.reports["exact_count"].d
        if exact == 0:
            # one bucket is unavoidable, every method is optimal
            return 1.0
        return self.reports[method].d / exact


@dataclass
class BenchmarkSummary:
    methods: tuple
    stats: dict
    time_ratio: dict
    instances: list
    n_excluded: int


def _run_instance(args):
    index, cfg = args
    S = cfg.dataset if cfg.dataset is not None else generate_instance(cfg.spec, index)
    res = InstanceResult(index, cfg.spec.seed)
    try:
        for method in cfg.methods:
            res.reports[method] = run_method(S, method, cfg.budget, cfg.smooth)
    except CapacityError as exc:
        res.error = str(exc)
        res.reports = {}
    return res


def five_numbers(x) -> dict:
    x = np.asarray(x, dtype=float)
    if x.size == 0:
        return {k: float("nan") for k in ("min", "q1", "median", "q3", "max", "mean")}
    q = np.percentile(x, [0, 25, 50, 75, 100], method="linear")
    return dict(zip(("min", "q1", "median", "q3", "max"), map(float, q)), mean=float(x.mean()))


def run_benchmark(config: BenchmarkConfig) -> BenchmarkSummary:
    work = [(i, config) for i in range(config.instances)]
    if config.jobs > 1:
        with ProcessPoolExecutor(config.jobs) as pool:
            results = list(pool.map(_run_instance, work))
    else:
        results = [_run_instance(w) for w in work]
    results.sort(key=lambda r: r.index)

    done = [r for r in results if r.error is None]
    excluded = len(results) - len(done)
    for r in results:
        if r.error is not None:
            log.warning("instance %d excluded: %s", r.index, r.error)

    stats = {}
    for method in config.methods:
        ratios = [r.ratio(method) for r in done]
        stats[method] = five_numbers(ratios)
        stats[method]["n_instances"] = len(ratios)
    time_ratio = {}
    if "min_range" in config.methods:
        times = [r.reports["min_range"].elapsed / r.reports["exact_count"].elapsed
                 for r in done if r.reports["exact_count"].elapsed > 0]
        time_ratio = five_numbers(times)
        time_ratio["n_instances"] = len(times)
    return BenchmarkSummary(config.methods, stats, time_ratio, results, excluded)


def _g(x) -> str:
    return f"{x:.6g}"


def emit_summary_csv(summary: BenchmarkSummary) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(SUMMARY_COLUMNS)
    rows = [(m, summary.stats[m]) for m in summary.methods]
    if summary.time_ratio:
        rows.append(("time_ratio", summary.time_ratio))
    for name, s in rows:
        w.writerow([name] + [_g(s[k]) for k in ("min", "q1", "median", "q3", "max", "mean")]
                   + [s["n_instances"], summary.n_excluded])
    return buf.getvalue()


def emit_detail_csv(summary: BenchmarkSummary) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(DETAIL_COLUMNS)
    for r in summary.instances:
        for method in summary.methods:
            rep = r.reports.get(method)
            if rep is None:
                w.writerow([r.index, r.seed, method, "", "", "", ""])
                continue
            cut = json.dumps([format_cutoff(c) for c in rep.cutoffs])
            w.writerow([r.index, r.seed, method, _g(rep.d), _g(rep.objective), cut,
                        _g(rep.elapsed * 1000.0)])
    return buf.getvalue()


def format_table(summary: BenchmarkSummary) -> str:
    lines = [f"{'method':<12} {'mean ratio':>10} {'median':>8} {'min':>8}"]
    for m in summary.methods:
        s = summary.stats[m]
        lines.append(f"{m:<12} {s['mean']:>10.4f} {s['median']:>8.4f} {s['min']:>8.4f}")
    if summary.time_ratio:
        s = summary.time_ratio
        lines.append(f"{'time_ratio':<12} {s['mean']:>10.4f} {s['median']:>8.4f} {s['min']:>8.4f}")
    return "\n".join(lines)


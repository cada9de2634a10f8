"""Exact solvers over the grid of valid cut indices.

The grid is walked like an odometer (score 0 outermost, score m-1
innermost).  Advancing score ``j`` by one valid step moves only the items of
the boundary tie group out of ``j``'s crossing set, so bucket counts and the
sum of squared counts are updated in O(1) per moved item.  When a score wraps
around, its items are put back, which leaves the state exactly as it started
once the walk is over.

Visiting points in lexicographic order and replacing the incumbent only on
strict improvement gives the lexicographically smallest optimal index vector.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field

import numba
import numpy as np

from .core import (COUNT, SUBSET, as_matrix, bucket_histogram, build_sorted_index,
                   distinguishability, n_buckets, realize_cutoffs, sum_of_squares, valid_cut_indices)
from .errors import CapacityError, UndefinedMetricError

DEFAULT_BUDGET = 10 ** 9
MAX_EXACT_SUBSET_SCORES = 12

SUM_OF_SQUARES = 0
RANGE = 1


@dataclass
class SolveReport:
    method: str
    cut_indices: tuple | None
    cutoffs: tuple
    histogram: tuple
    d: float
    objective: float
    iterations: int = 0
    evaluations: int = 0
    elapsed: float = 0.0
    info: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "method": self.method,
            "cutoff_values": [format_cutoff(c) for c in self.cutoffs],
            "cutoff_indices": None if self.cut_indices is None else list(self.cut_indices),
            "bucket_counts": list(self.histogram),
            "distinguishability": self.d,
            "objective": self.objective,
            "iterations": self.iterations,
            "evaluations": self.evaluations,
            "elapsed_ms": self.elapsed * 1000.0,
        }


def format_cutoff(c: float):
    if c == np.inf:
        return "inf"
    if c == -np.inf:
        return "-inf"
    return float(c)


@numba.njit(cache=True)
def _move(item, step, bucket, counts, sumsq):
    b = bucket[item]
    nb = b + step
    sumsq += 2 * (counts[nb] - counts[b]) + 2
    counts[b] -= 1
    counts[nb] += 1
    bucket[item] = nb
    return sumsq


@numba.njit(cache=True)
def _score(counts, sumsq, kind):
    if kind == 0:
        return sumsq, 0
    lo = counts[0]
    hi = counts[0]
    for c in counts:
        if c < lo:
            lo = c
        if c > hi:
            hi = c
    return hi - lo, sumsq


@numba.njit(cache=True)
def _walk(order, valid, n_valid, delta, n_buckets, kind, trace):
    """Enumerate every valid index vector; return the best grid positions.

    ``trace`` (length 0 to disable) receives the sum of squares at each
    visited point, in visiting order.
    """
    m, n = order.shape
    full = 0
    for j in range(m):
        full += delta[j]
    bucket = np.full(n, full, np.int64)
    counts = np.zeros(n_buckets, np.int64)
    counts[full] = n
    sumsq = n * n
    pos = np.zeros(m, np.int64)

    best_pos = pos.copy()
    best1, best2 = _score(counts, sumsq, kind)
    evaluations = 1
    if trace.shape[0] > 0:
        trace[0] = sumsq

    while True:
        j = m - 1
        while j >= 0 and pos[j] == n_valid[j] - 1:
            # wrap score j back to k = 0: everyone below the cut crosses again
            for r in range(valid[j, pos[j]]):
                sumsq = _move(order[j, r], delta[j], bucket, counts, sumsq)
            pos[j] = 0
            j -= 1
        if j < 0:
            break
        for r in range(valid[j, pos[j]], valid[j, pos[j] + 1]):
            sumsq = _move(order[j, r], -delta[j], bucket, counts, sumsq)
        pos[j] += 1
        if trace.shape[0] > 0:
            trace[evaluations] = sumsq
        evaluations += 1
        s1, s2 = _score(counts, sumsq, kind)
        if s1 < best1 or (s1 == best1 and s2 < best2):
            best1 = s1
            best2 = s2
            best_pos[:] = pos
    return best_pos, best1, best2, evaluations, bucket, counts, sumsq


@dataclass
class GridResult:
    cut_indices: tuple
    primary: int
    secondary: int
    evaluations: int
    restored: bool
    trace: np.ndarray | None = None


def grid_size(S) -> int:
    idx = build_sorted_index(S)
    size = 1
    for j in range(idx.m):
        size *= len(valid_cut_indices(idx, j))
    return size


def enumerate_grid(S, scheme: str = COUNT, kind: int = SUM_OF_SQUARES,
                   budget: int = DEFAULT_BUDGET, record: bool = False) -> GridResult:
    """Run the incremental walk and return the optimum over the whole grid."""
    S = as_matrix(S)
    idx = build_sorted_index(S)
    B = n_buckets(S.m, scheme)
    valids = [valid_cut_indices(idx, j) for j in range(S.m)]
    required = 1
    for v in valids:
        required *= len(v)
    if required > budget:
        raise CapacityError(
            f"exhaustive search needs {required} evaluations, budget is {budget}",
            required=required)

    n_valid = np.array([len(v) for v in valids], dtype=np.int64)
    valid = np.zeros((S.m, S.n + 1), dtype=np.int64)
    for j, v in enumerate(valids):
        valid[j, :len(v)] = v
    if scheme == COUNT:
        delta = np.ones(S.m, dtype=np.int64)
    else:
        delta = 1 << np.arange(S.m, dtype=np.int64)
    order = np.ascontiguousarray(idx.order, dtype=np.int64)
    trace = np.zeros(required if record else 0, dtype=np.int64)

    best_pos, p1, p2, evals, bucket, counts, sumsq = _walk(
        order, valid, n_valid, delta, B, kind, trace)
    full = int(delta.sum())
    restored = (bool(np.all(bucket == full)) and counts[full] == S.n
                and int(counts.sum()) == S.n and sumsq == S.n * S.n)
    k = tuple(int(valids[j][best_pos[j]]) for j in range(S.m))
    return GridResult(k, int(p1), int(p2), int(evals), restored,
                      trace if record else None)


def report_from_indices(S, method, k, scheme=COUNT, objective=None, **kw) -> SolveReport:
    S = as_matrix(S)
    idx = build_sorted_index(S)
    c = realize_cutoffs(k, idx)
    h = bucket_histogram(S, c, scheme)
    if objective is None:
        objective = sum_of_squares(h)
    return SolveReport(method, tuple(int(x) for x in k), c, tuple(int(x) for x in h),
                       distinguishability(h), float(objective), **kw)


def _require_pairs(S):
    if S.n < 2:
        raise UndefinedMetricError(f"need at least 2 items, got {S.n}")


def solve_exact_count(S, budget: int = DEFAULT_BUDGET) -> SolveReport:
    """Global maximizer of distinguish-ability under count bucketing."""
    S = as_matrix(S)
    _require_pairs(S)
    t0 = time.perf_counter()
    res = enumerate_grid(S, COUNT, SUM_OF_SQUARES, budget)
    rep = report_from_indices(S, "exact_count", res.cut_indices, COUNT,
                              objective=res.primary, iterations=1,
                              evaluations=res.evaluations)
    rep.elapsed = time.perf_counter() - t0
    return rep


def solve_exact_subset(S, budget: int = DEFAULT_BUDGET) -> SolveReport:
    """Same as :func:`solve_exact_count`, bucketing by the subset of crossed scores."""
    S = as_matrix(S)
    _require_pairs(S)
    if S.m > MAX_EXACT_SUBSET_SCORES:
        raise CapacityError(
            f"subset bucketing supports m <= {MAX_EXACT_SUBSET_SCORES}, got m={S.m}",
            required=2 ** S.m)
    t0 = time.perf_counter()
    res = enumerate_grid(S, SUBSET, SUM_OF_SQUARES, budget)
    rep = report_from_indices(S, "exact_subset", res.cut_indices, SUBSET,
                              objective=res.primary, iterations=1,
                              evaluations=res.evaluations)
    rep.elapsed = time.perf_counter() - t0
    return rep


def solve_min_range(S, budget: int = DEFAULT_BUDGET) -> SolveReport:
    """Minimize max - min of the bucket counts (count bucketing).

    Ties go to the smaller sum of squares, then the lexicographically
    smallest index vector.
    """
    S = as_matrix(S)
    _require_pairs(S)
    t0 = time.perf_counter()
    res = enumerate_grid(S, COUNT, RANGE, budget)
    rep = report_from_indices(S, "min_range", res.cut_indices, COUNT,
                              objective=res.primary, iterations=1,
                              evaluations=res.evaluations)
    rep.elapsed = time.perf_counter() - t0
    return rep

"""Coordinate-wise greedy search over the candidate cut-offs of each score."""
from __future__ import annotations

import time

import numpy as np

from .core import as_matrix, build_sorted_index, valid_cut_indices
from .errors import UndefinedMetricError
from .grid_search import SolveReport, report_from_indices

BEST = "best_improvement"
FIRST = "first_improvement"
MODES = (BEST, FIRST)


def median_start(idx) -> list:
    """Valid cut index closest to the median: floor(n/2), moved down past ties."""
    k = []
    for j in range(idx.m):
        valid = valid_cut_indices(idx, j)
        k.append(int(valid[np.searchsorted(valid, idx.n // 2, side="right") - 1]))
    return k


def sweep_sums(idx, crossed, j) -> np.ndarray:
    """Sum of squared bucket counts for every cut index 0..n of score ``j``.

    ``crossed`` is the (n, m) crossing matrix of the current solution; all
    scores other than ``j`` stay fixed.
    """
    m = crossed.shape[1]
    base = crossed.sum(axis=1) - crossed[:, j]
    base_sorted = base[idx.order[j]]
    below = np.zeros((idx.n + 1, m + 1), dtype=np.int64)
    np.cumsum(np.eye(m + 1, dtype=np.int64)[base_sorted], axis=0, out=below[1:])
    # items ranked below k keep their base bucket, the rest gain one
    counts = below.copy()
    counts[:, 1:] += below[-1, :-1] - below[:, :-1]
    return np.einsum("kb,kb->k", counts, counts)


def solve_greedy(S, mode: str = BEST, max_sweeps: int | None = None) -> SolveReport:
    S = as_matrix(S)
    if S.n < 2:
        raise UndefinedMetricError(f"need at least 2 items, got {S.n}")
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")
    t0 = time.perf_counter()
    idx = build_sorted_index(S)
    valids = [valid_cut_indices(idx, j) for j in range(S.m)]
    k = median_start(idx)
    crossed = idx.rank.T >= np.asarray(k)[None, :]
    start_counts = np.bincount(crossed.sum(axis=1), minlength=S.m + 1)
    best = int(start_counts @ start_counts)
    start = best

    sweeps = evaluations = 0
    while max_sweeps is None or sweeps < max_sweeps:
        sweeps += 1
        improved = False
        move = None
        for j in range(S.m):
            sums = sweep_sums(idx, crossed, j)[valids[j]]
            evaluations += len(sums)
            if mode == FIRST:
                # accepting each strict improvement in turn ends on the first minimum
                i = int(np.argmin(sums))
                if sums[i] < best:
                    best = int(sums[i])
                    k[j] = int(valids[j][i])
                    crossed[:, j] = idx.rank[j] >= k[j]
                    improved = True
            else:
                i = int(np.argmin(sums))
                if sums[i] < (best if move is None else move[2]):
                    move = (j, int(valids[j][i]), int(sums[i]))
        if mode == BEST and move is not None:
            j, k[j], best = move
            crossed[:, j] = idx.rank[j] >= k[j]
            improved = True
        if not improved:
            break

    rep = report_from_indices(S, "greedy", k, iterations=sweeps, evaluations=evaluations)
    rep.info.update(mode=mode, start_objective=start)
    rep.elapsed = time.perf_counter() - t0
    return rep

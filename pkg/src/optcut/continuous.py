"""Smoothed objective over real cut-offs and backtracking gradient descent.

Hard crossings are replaced by logistic curves, an item's bucket number by the
sum of its logistic crossings, and bucket membership by the bump
``4 s (1 - s)`` of a logistic centred on each bucket index ``0..m``.  The
smoothed cost is the sum over buckets of the squared soft counts.
"""
from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numba
import numpy as np

from .core import as_matrix, median_cutoffs, snap_to_indices
from .errors import NumericError, UndefinedMetricError
from .grid_search import SolveReport, report_from_indices


@dataclass(frozen=True)
class SmoothConfig:
    r: float = 5.0
    eps_init: float = 1.0
    shrink: float = 1.1
    grad_tol: float = 1e-8
    eps_min: float = 1e-12
    max_iters: int = 10_000

    def __post_init__(self):
        if not self.r > 0:
            raise ValueError(f"sharpness r must be positive, got {self.r}")
        if not self.shrink > 1:
            raise ValueError(f"shrink factor must exceed 1, got {self.shrink}")
        if not self.eps_min < self.eps_init:
            raise ValueError("eps_min must be below eps_init")


@dataclass
class SmoothState:
    cutoffs: np.ndarray
    objective: float
    gradient: np.ndarray


def _expit(z):
    e = np.exp(-np.abs(z))
    return np.where(z >= 0, 1.0 / (1.0 + e), e / (1.0 + e))


def sigma(x, c, r):
    """Logistic ``1 / (1 + exp(-r (x - c)))``, overflow-free."""
    return _expit(r * (np.asarray(x, dtype=float) - c))


def bump(x, i, r):
    """``4 s (1 - s)`` with ``s = sigma(x, i, r)``; peaks at 1 when ``x == i``."""
    z = r * (np.asarray(x, dtype=float) - i)
    return 4.0 * _expit(z) * _expit(-z)


@numba.njit(cache=True)
def _logistic(z):
    # returns s and s (1 - s); the product form avoids cancellation near s = 1
    if z >= 0.0:
        e = math.exp(-z)
        s = 1.0 / (1.0 + e)
        return s, e / (1.0 + e) * s
    e = math.exp(z)
    s = e / (1.0 + e)
    return s, s / (1.0 + e)


@numba.njit(cache=True)
def _objective(values, cutoffs, r):
    n, m = values.shape
    counts = np.zeros(m + 1)
    for i in range(n):
        level = 0.0
        for j in range(m):
            level += _logistic(r * (values[i, j] - cutoffs[j]))[0]
        for b in range(m + 1):
            counts[b] += 4.0 * _logistic(r * (level - b))[1]
    return np.dot(counts, counts)


@numba.njit(cache=True)
def _gradient(values, cutoffs, r):
    n, m = values.shape
    B = m + 1
    ds = np.empty((n, m))
    mu_s = np.empty((n, B))
    mu_ds = np.empty((n, B))
    counts = np.zeros(B)
    for i in range(n):
        level = 0.0
        for j in range(m):
            s, d = _logistic(r * (values[i, j] - cutoffs[j]))
            level += s
            ds[i, j] = d
        for b in range(B):
            s, d = _logistic(r * (level - b))
            mu_s[i, b] = s
            mu_ds[i, b] = d
            counts[b] += 4.0 * d
    grad = np.zeros(m)
    for i in range(n):
        # d f / d level_i, with d mu / d level = 4 r s (1 - s)(1 - 2 s)
        dlevel = 0.0
        for b in range(B):
            dlevel += 2.0 * counts[b] * 4.0 * r * mu_ds[i, b] * (1.0 - 2.0 * mu_s[i, b])
        # d level_i / d c_j = -r s_ij (1 - s_ij)
        for j in range(m):
            grad[j] -= r * ds[i, j] * dlevel
    return grad


STOP_CODES = ("gradient", "step", "max_iters", "non_finite")


@numba.njit(cache=True)
def _descend(values, x, r, eps_init, shrink, grad_tol, eps_min, max_iters):
    objectives = np.empty(max_iters + 1)
    steps = np.empty(max_iters)
    f = _objective(values, x, r)
    objectives[0] = f
    evaluations = 1
    it = 0
    stop = 2
    while it < max_iters:
        g = _gradient(values, x, r)
        if not np.isfinite(f) or not np.all(np.isfinite(g)):
            stop = 3
            break
        if np.max(np.abs(g)) < grad_tol:
            stop = 0
            break
        eps = eps_init
        cand = x - eps * g
        fc = _objective(values, cand, r)
        evaluations += 1
        while not fc < f:
            eps /= shrink
            if eps < eps_min:
                break
            cand = x - eps * g
            fc = _objective(values, cand, r)
            evaluations += 1
        if eps < eps_min:
            stop = 1
            break
        x = cand
        f = fc
        steps[it] = eps
        it += 1
        objectives[it] = f
    return x, objectives[:it + 1], steps[:it], evaluations, stop


def smooth_objective(S, cutoffs, r) -> float:
    S = as_matrix(S)
    return float(_objective(S.values, np.asarray(cutoffs, dtype=float), float(r)))


def smooth_gradient(S, cutoffs, r) -> np.ndarray:
    """Analytic derivative of :func:`smooth_objective` with respect to the cut-offs."""
    S = as_matrix(S)
    return _gradient(S.values, np.asarray(cutoffs, dtype=float), float(r))


def smooth_state(S, cutoffs, r) -> SmoothState:
    c = np.asarray(cutoffs, dtype=float)
    return SmoothState(c.copy(), smooth_objective(S, c, r), smooth_gradient(S, c, r))


@dataclass
class DescentTrace:
    cutoffs: np.ndarray
    objectives: np.ndarray
    steps: np.ndarray
    evaluations: int
    stop: str

    @property
    def iterations(self) -> int:
        return len(self.steps)


def descend(S, config: SmoothConfig = SmoothConfig(), start=None) -> DescentTrace:
    """Gradient descent on the smoothed cost.

    Each iteration tries ``eps_init`` and divides the step by ``shrink`` until
    the smoothed cost strictly drops; it stops when the gradient is below
    ``grad_tol`` (max-norm), the step falls under ``eps_min`` or after
    ``max_iters`` accepted steps.
    """
    S = as_matrix(S)
    x0 = np.array(median_cutoffs(S) if start is None else start, dtype=float)
    x, objectives, steps, evaluations, stop = _descend(
        S.values, x0, float(config.r), float(config.eps_init), float(config.shrink),
        float(config.grad_tol), float(config.eps_min), int(config.max_iters))
    if STOP_CODES[stop] == "non_finite":
        raise NumericError(f"non-finite objective or gradient at cut-offs {x}")
    return DescentTrace(x, objectives, steps, int(evaluations), STOP_CODES[stop])


def solve_continuous(S, config: SmoothConfig = SmoothConfig()) -> SolveReport:
    """Descend from the median cut-offs, then snap onto valid cut indices.

    The snap keeps every item's crossings unchanged, so the reported
    histogram and distinguish-ability are those of the descended cut-offs.
    """
    S = as_matrix(S)
    if S.n < 2:
        raise UndefinedMetricError(f"need at least 2 items, got {S.n}")
    t0 = time.perf_counter()
    trace = descend(S, config)
    k = snap_to_indices(S, trace.cutoffs)
    rep = report_from_indices(S, "continuous", k, objective=float(trace.objectives[-1]),
                              iterations=trace.iterations,
                              evaluations=trace.evaluations)
    rep.info.update(raw_cutoffs=[float(c) for c in trace.cutoffs], stop=trace.stop, r=config.r)
    rep.elapsed = time.perf_counter() - t0
    return rep

"""Score matrices, cut indices and the distinguish-ability metric.

An item crosses cut-off ``c_j`` when its j-th score is ``>= c_j``; its bucket
(count scheme) is the number of cut-offs it crosses, so buckets run ``0..m``.
Under the subset scheme the bucket id is the bitmask of crossed scores.

Discrete cut-offs are handled as cut indices: ``k_j`` is the number of items
(in ascending score order) that do *not* cross score ``j``.  A cut index may
not separate two equal scores.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import CapacityError, InvalidCutIndexError, UndefinedMetricError

COUNT = "count"
SUBSET = "subset"
MAX_SUBSET_SCORES = 20


@dataclass(frozen=True, eq=False)
class ScoreMatrix:
    """n items by m real scores, with opaque item labels (strings, default "1".."n")."""

    values: np.ndarray
    ids: tuple

    def __post_init__(self):
        values = np.array(self.values, dtype=float)
        if values.ndim != 2:
            raise ValueError("scores must form a 2-d table")
        n, m = values.shape
        if n < 1 or m < 1:
            raise ValueError(f"need at least one item and one score, got {n}x{m}")
        if not np.all(np.isfinite(values)):
            raise ValueError("scores must be finite")
        ids = tuple(str(i) for i in (self.ids if self.ids is not None else range(1, n + 1)))
        if len(ids) != n:
            raise ValueError(f"{len(ids)} item ids for {n} rows")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "ids", ids)

    @classmethod
    def from_rows(cls, rows, ids=None) -> "ScoreMatrix":
        return cls(np.asarray(rows, dtype=float), ids)

    @property
    def n(self) -> int:
        return self.values.shape[0]

    @property
    def m(self) -> int:
        return self.values.shape[1]

    def __eq__(self, other):
        if not isinstance(other, ScoreMatrix):
            return NotImplemented
        return self.ids == other.ids and np.array_equal(self.values, other.values)

    def __repr__(self):
        return f"ScoreMatrix(n={self.n}, m={self.m})"


def as_matrix(S) -> ScoreMatrix:
    if isinstance(S, ScoreMatrix):
        return S
    return ScoreMatrix.from_rows(S)


@dataclass(frozen=True, eq=False)
class SortedScoreIndex:
    """Per-score ascending order of items.

    ``order[j, r]`` is the (0-based) item at sorted rank ``r`` of score ``j``;
    ``values[j, r]`` its score and ``rank[j, i]`` the inverse permutation.
    Ties keep ascending item order.
    """

    order: np.ndarray
    values: np.ndarray
    rank: np.ndarray

    @property
    def n(self) -> int:
        return self.order.shape[1]

    @property
    def m(self) -> int:
        return self.order.shape[0]


def build_sorted_index(S) -> SortedScoreIndex:
    S = as_matrix(S)
    # stable sort keeps original item order inside tie groups
    order = np.argsort(S.values.T, axis=1, kind="stable")
    values = np.take_along_axis(S.values.T, order, axis=1)
    rank = np.empty_like(order)
    rows = np.arange(S.m)[:, None]
    rank[rows, order] = np.arange(S.n)[None, :]
    for a in (order, values, rank):
        a.setflags(write=False)
    return SortedScoreIndex(order, values, rank)


def valid_cut_indices(idx: SortedScoreIndex, j: int) -> np.ndarray:
    """Ascending cut indices of score ``j`` (0-based) that respect ties."""
    v = idx.values[j]
    inner = np.flatnonzero(v[:-1] < v[1:]) + 1
    return np.concatenate(([0], inner, [idx.n])).astype(np.int64)


def check_cut_indices(k: Sequence[int], idx: SortedScoreIndex) -> tuple:
    k = tuple(int(x) for x in k)
    if len(k) != idx.m:
        raise InvalidCutIndexError(f"expected {idx.m} cut indices, got {len(k)}")
    for j, kj in enumerate(k):
        if not 0 <= kj <= idx.n:
            raise InvalidCutIndexError(f"cut index {kj} for score {j} outside 0..{idx.n}")
        if 0 < kj < idx.n and not idx.values[j, kj - 1] < idx.values[j, kj]:
            raise InvalidCutIndexError(
                f"cut index {kj} for score {j} splits a group of tied scores")
    return k


def realize_cutoffs(k: Sequence[int], idx: SortedScoreIndex) -> tuple:
    """Turn cut indices into cut-off values (midpoints or infinite sentinels)."""
    k = check_cut_indices(k, idx)
    out = []
    for j, kj in enumerate(k):
        if kj == 0:
            out.append(-np.inf)
        elif kj == idx.n:
            out.append(np.inf)
        else:
            out.append(float((idx.values[j, kj - 1] + idx.values[j, kj]) / 2))
    return tuple(out)


def snap_to_indices(S, cutoffs) -> tuple:
    """Cut indices that reproduce the crossings of value-based cut-offs.

    ``k_j`` counts the scores strictly below ``c_j``; such an index never
    splits a tie group, so the result is always valid.
    """
    S = as_matrix(S)
    c = np.asarray(cutoffs, dtype=float)
    return tuple(int(x) for x in (S.values < c[None, :]).sum(axis=0))


def crossing_matrix(S, cutoffs, strict: bool = False) -> np.ndarray:
    """Boolean (n, m) table of crossings; ``strict`` switches to ``score > c``."""
    S = as_matrix(S)
    c = np.asarray(cutoffs, dtype=float)
    if c.shape != (S.m,):
        raise ValueError(f"expected {S.m} cut-offs, got shape {c.shape}")
    if strict:
        return S.values > c[None, :]
    return S.values >= c[None, :]


def crossings(S, cutoffs) -> np.ndarray:
    """Number of cut-offs each item clears."""
    return crossing_matrix(S, cutoffs).sum(axis=1)


def n_buckets(m: int, scheme: str = COUNT) -> int:
    if scheme == COUNT:
        return m + 1
    if scheme == SUBSET:
        if m > MAX_SUBSET_SCORES:
            raise CapacityError(
                f"subset bucketing with m={m} needs 2^{m} buckets "
                f"(limit m <= {MAX_SUBSET_SCORES})", required=2 ** m)
        return 2 ** m
    raise ValueError(f"unknown bucketing scheme {scheme!r}")


def bucket_ids(S, cutoffs, scheme: str = COUNT, strict: bool = False) -> np.ndarray:
    X = crossing_matrix(S, cutoffs, strict)
    if scheme == COUNT:
        return X.sum(axis=1)
    n_buckets(X.shape[1], scheme)
    weights = 1 << np.arange(X.shape[1], dtype=np.int64)
    return X.astype(np.int64) @ weights


def bucket_histogram(S, cutoffs, scheme: str = COUNT, strict: bool = False) -> np.ndarray:
    S = as_matrix(S)
    B = n_buckets(S.m, scheme)
    return np.bincount(bucket_ids(S, cutoffs, scheme, strict), minlength=B)


def sum_of_squares(counts) -> int:
    counts = np.asarray(counts, dtype=np.int64)
    return int(np.dot(counts, counts))


def distinguishability(counts) -> float:
    """Fraction of ordered pairs of distinct items that sit in different buckets."""
    counts = np.asarray(counts, dtype=np.int64)
    n = int(counts.sum())
    if n < 2:
        raise UndefinedMetricError(f"distinguish-ability needs at least 2 items, got {n}")
    return (n * n - sum_of_squares(counts)) / (n * (n - 1))


def distinguishability_by_pairs(S, cutoffs, scheme: str = COUNT) -> float:
    S = as_matrix(S)
    n = S.n
    if n < 2:
        raise UndefinedMetricError(f"distinguish-ability needs at least 2 items, got {n}")
    b = bucket_ids(S, cutoffs, scheme)
    different = 0
    for a in range(n):
        for c in range(a + 1, n):
            if b[a] != b[c]:
                different += 1
    return (2 * different) / (n * (n - 1))


def median_cutoffs(S) -> tuple:
    S = as_matrix(S)
    return tuple(float(x) for x in np.median(S.values, axis=0))


def evaluate_cutoffs(S, cutoffs, scheme: str = COUNT):
    """Histogram and distinguish-ability of a set of cut-offs."""
    h = bucket_histogram(S, cutoffs, scheme)
    return h, distinguishability(h)

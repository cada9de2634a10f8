"""Cut-offs induced by item subsets, and marginal-gain checks on them.

A non-empty subset ``E`` of items induces the cut-offs ``c(E)`` given by the
column-wise minimum of its scores, so every member of ``E`` crosses all of
them.  ``f(E)`` is the sum of squared bucket counts under ``c(E)``.

Item labels are 1-based row numbers by default (``base=1``); pass ``base=0``
to read the same labels as 0-based row positions.  ``strict=True`` counts a
crossing only when the score is strictly above the cut-off, in which case the
members of ``E`` that attain a minimum no longer cross it.
"""
from __future__ import annotations

from dataclasses import dataclass

from .core import as_matrix, bucket_histogram, sum_of_squares


def _rows(S, E, base):
    E = sorted(set(int(i) for i in E))
    if not E:
        raise ValueError("subset must be non-empty")
    rows = [i - base for i in E]
    if rows[0] < 0 or rows[-1] >= S.n:
        raise ValueError(f"subset members must lie in {base}..{S.n - 1 + base}")
    return rows


def induced_cutoffs(S, E, base: int = 1) -> tuple:
    S = as_matrix(S)
    rows = _rows(S, E, base)
    return tuple(float(x) for x in S.values[rows].min(axis=0))


def set_value(S, E, base: int = 1, strict: bool = False) -> int:
    S = as_matrix(S)
    return sum_of_squares(bucket_histogram(S, induced_cutoffs(S, E, base), strict=strict))


@dataclass(frozen=True)
class ModularityReport:
    marginal_A: int
    marginal_B: int
    base: int = 1
    strict: bool = False

    @property
    def submodular_violated(self) -> bool:
        return self.marginal_A < self.marginal_B

    @property
    def supermodular_violated(self) -> bool:
        return self.marginal_A > self.marginal_B


def check_modularity(S, A, B, x, base: int = 1, strict: bool = False) -> ModularityReport:
    """Compare ``f(A + x) - f(A)`` with ``f(B + x) - f(B)`` for ``A`` inside ``B``."""
    S = as_matrix(S)
    A, B, x = set(A), set(B), int(x)
    if not A <= B:
        raise ValueError(f"A is not a subset of B (extra: {sorted(A - B)})")
    if x in B:
        raise ValueError(f"x = {x} already belongs to B")
    f = lambda E: set_value(S, E, base, strict)  # noqa: E731
    return ModularityReport(f(A | {x}) - f(A), f(B | {x}) - f(B), base, strict)


# the two subset pairs used to show f is neither submodular nor supermodular
EXAMPLE_SUBMODULAR = (
    {32, 37, 5, 10, 43, 12, 46, 48, 49, 22, 29},
    {32, 1, 37, 5, 10, 11, 43, 12, 46, 45, 48, 49, 22, 29},
    24,
)
EXAMPLE_SUPERMODULAR = (
    {23, 46, 47},
    {2, 3, 5, 7, 10, 14, 17, 18, 20, 23, 24, 25, 26, 27, 29,
     30, 32, 36, 41, 43, 44, 45, 46, 47, 48, 49},
    34,
)


REFERENCE_MARGINALS = {"submodular": (342, 416), "supermodular": (472, 86)}


def check_examples(S) -> list:
    """Evaluate both example triples under every labelling/crossing convention.

    Returns one dict per (example, base, strict) with the marginals, the
    violation flags, and whether the reference marginals were reproduced.
    """
    rows = []
    for name, (A, B, x) in (("submodular", EXAMPLE_SUBMODULAR),
                            ("supermodular", EXAMPLE_SUPERMODULAR)):
        for base in (1, 0):
            for strict in (False, True):
                rep = check_modularity(S, A, B, x, base, strict)
                rows.append({
                    "example": name,
                    "base": base,
                    "strict": strict,
                    "marginal_A": rep.marginal_A,
                    "marginal_B": rep.marginal_B,
                    "submodular_violated": rep.submodular_violated,
                    "supermodular_violated": rep.supermodular_violated,
                    "reproduces_reference": (rep.marginal_A, rep.marginal_B) == REFERENCE_MARGINALS[name],
                })
    return rows

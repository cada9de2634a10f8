"""Write the binary cut-off models in CPLEX LP format.

Variables: ``x_i_j`` (item i crosses score j), ``y_i_k`` (item i crosses
exactly k cut-offs, k = 0..m) and the bucket counts ``t_k``.  The range model
adds the envelope variables ``s`` and ``t``.  Items and scores are numbered
from 1, buckets from 0.
"""
from __future__ import annotations

from .core import as_matrix, build_sorted_index
from .errors import UndefinedMetricError


def _coef(c) -> str:
    return f"{c:.6g}"


def _expr(terms) -> str:
    """Render ``[(coef, var), ...]`` as an LP linear expression."""
    out = []
    for c, v in terms:
        if c == 0:
            continue
        sign = "-" if c < 0 else "+"
        mag = abs(c)
        body = v if mag == 1 else f"{_coef(mag)} {v}"
        if not out:
            out.append(body if sign == "+" else f"- {body}")
        else:
            out.append(f"{sign} {body}")
    return " ".join(out)


def _rows(S):
    n, m = S.n, S.m
    idx = build_sorted_index(S)
    rows = []
    for j in range(m):
        order, vals = idx.order[j], idx.values[j]
        for r in range(n - 1):
            lo, hi = order[r] + 1, order[r + 1] + 1
            rows.append(f" mono_{j + 1}_{r + 1}: {_expr([(1, f'x_{hi}_{j + 1}'), (-1, f'x_{lo}_{j + 1}')])} >= 0")
        for r in range(n - 1):
            if vals[r] == vals[r + 1]:
                lo, hi = order[r] + 1, order[r + 1] + 1
                rows.append(f" tie_{j + 1}_{r + 1}: {_expr([(1, f'x_{lo}_{j + 1}'), (-1, f'x_{hi}_{j + 1}')])} = 0")
    for i in range(1, n + 1):
        terms = [(k, f"y_{i}_{k}") for k in range(m + 1)]
        terms += [(-1, f"x_{i}_{j}") for j in range(1, m + 1)]
        rows.append(f" link_{i}: {_expr(terms)} = 0")
    for i in range(1, n + 1):
        rows.append(f" assign_{i}: {_expr([(1, f'y_{i}_{k}') for k in range(m + 1)])} = 1")
    for k in range(m + 1):
        terms = [(1, f"y_{i}_{k}") for i in range(1, n + 1)] + [(-1, f"t_{k}")]
        rows.append(f" colsum_{k}: {_expr(terms)} = 0")
    return rows


def _binaries(S):
    names = [f"x_{i}_{j}" for i in range(1, S.n + 1) for j in range(1, S.m + 1)]
    names += [f"y_{i}_{k}" for i in range(1, S.n + 1) for k in range(S.m + 1)]
    return names


def _model(S, formulation):
    S = as_matrix(S)
    if S.n < 2:
        raise UndefinedMetricError(f"need at least 2 items, got {S.n}")
    m = S.m
    lines = [f"\\ optimal cut-offs: n={S.n} items, m={m} scores"]
    lines.append("Minimize")
    if formulation == "iqp":
        quad = " + ".join(f"2 t_{k} ^ 2" for k in range(m + 1))
        lines.append(f" obj: [ {quad} ] / 2")
    else:
        lines.append(" obj: s - t")
    lines.append("Subject To")
    lines += _rows(S)
    if formulation == "ilp":
        for k in range(m + 1):
            lines.append(f" upper_{k}: t_{k} - s <= 0")
        for k in range(m + 1):
            lines.append(f" lower_{k}: t_{k} - t >= 0")
    lines.append("Bounds")
    for k in range(m + 1):
        lines.append(f" 0 <= t_{k} <= {S.n}")
    if formulation == "ilp":
        lines.append(f" 0 <= s <= {S.n}")
        lines.append(f" 0 <= t <= {S.n}")
    lines.append("Binaries")
    lines += [f" {v}" for v in _binaries(S)]
    lines.append("End")
    return "\n".join(lines) + "\n"


def export_iqp(S) -> str:
    """Quadratic model: minimize the sum of squared bucket counts."""
    return _model(S, "iqp")


def export_ilp(S) -> str:
    """Linear surrogate: minimize the spread ``s - t`` of the bucket counts."""
    return _model(S, "ilp")


def export_model(S, formulation: str) -> str:
    if formulation not in ("iqp", "ilp"):
        raise ValueError(f"unknown formulation {formulation!r}")
    return _model(S, formulation)

import re
from itertools import product
from pathlib import Path

import pytest

import oracles
from optcut.grid_search import solve_min_range
from optcut.model_export import export_ilp, export_iqp, export_model

GOLDEN = Path(__file__).parent / "golden"
TWO = [[0.0], [1.0]]


def sections(text):
    out, name = {}, None
    for line in text.splitlines():
        if line.startswith("\\"):
            continue
        if not line.startswith(" "):
            name = line
            out[name] = []
        else:
            out[name].append(line.strip())
    return out


def parse_rows(text):
    """``name -> (coefficients, op, rhs)`` for every linear row."""
    rows = {}
    for line in sections(text)["Subject To"]:
        name, body = line.split(": ", 1)
        lhs, op, rhs = re.fullmatch(r"(.*) (>=|<=|=) (\S+)", body).groups()
        coef, sign = {}, 1
        toks = lhs.split()
        i = 0
        while i < len(toks):
            t = toks[i]
            if t in "+-":
                sign = 1 if t == "+" else -1
            elif re.fullmatch(r"[\d.]+", t):
                coef[toks[i + 1]] = sign * float(t)
                i += 1
            else:
                coef[t] = sign
            i += 1
        rows[name] = (coef, op, float(rhs))
    return rows


def holds(row, assignment):
    coef, op, rhs = row
    lhs = sum(c * assignment[v] for v, c in coef.items())
    return {"=": lhs == rhs, ">=": lhs >= rhs, "<=": lhs <= rhs}[op]


def family(rows, prefix):
    return [r for r in rows if r.startswith(prefix + "_")]


class TestGolden:
    @pytest.mark.parametrize("kind", ["iqp", "ilp"])
    def test_bytes(self, kind):
        expected = (GOLDEN / f"{kind}_n2_m1.lp").read_bytes()
        assert export_model(TWO, kind).encode("utf-8") == expected

    def test_deterministic(self, table1):
        assert export_iqp(table1) == export_iqp(table1)


class TestStructure:
    def test_family_counts(self):
        rows = parse_rows(export_iqp(TWO))
        counts = {p: len(family(rows, p)) for p in ("mono", "tie", "link", "assign", "colsum")}
        assert counts == {"mono": 1, "tie": 0, "link": 2, "assign": 2, "colsum": 2}
        sec = sections(export_iqp(TWO))
        assert len([v for v in sec["Binaries"] if v.startswith("x_")]) == 2
        assert len([v for v in sec["Binaries"] if v.startswith("y_")]) == 4
        assert len(sec["Bounds"]) == 2

    def test_tie_row(self):
        text = export_iqp([[3.0], [3.0]])
        rows = parse_rows(text)
        assert len(family(rows, "tie")) == 1
        feasible = []
        for x1, x2 in product((0, 1), repeat=2):
            a = {"x_1_1": x1, "x_2_1": x2}
            if all(holds(rows[r], a) for r in family(rows, "mono") + family(rows, "tie")):
                feasible.append((x1, x2))
        assert feasible == [(0, 0), (1, 1)]

    def test_table1_variable_count(self, table1):
        sec = sections(export_iqp(table1))
        names = set(sec["Binaries"]) | {re.search(r"t_\d+", b).group() for b in sec["Bounds"]}
        assert len(names) == 50 * 3 + 50 * 4 + 4 == 354

    def test_ilp_differs_only_in_objective_and_bounds(self, table1):
        iqp, ilp = export_iqp(table1).splitlines(), export_ilp(table1).splitlines()
        extra = [line for line in ilp if line not in iqp]
        missing = [line for line in iqp if line not in ilp]
        assert missing == [" obj: [ 2 t_0 ^ 2 + 2 t_1 ^ 2 + 2 t_2 ^ 2 + 2 t_3 ^ 2 ] / 2"]
        assert extra[0] == " obj: s - t"
        rest = extra[1:]
        assert len([r for r in rest if re.match(r" (upper|lower)_\d:", r)]) == 2 * 4
        assert sorted(r for r in rest if not re.match(r" (upper|lower)_\d:", r)) == [
            " 0 <= s <= 50", " 0 <= t <= 50"]

    def test_needs_two_items(self):
        with pytest.raises(ValueError):
            export_iqp([[1.0]])
        with pytest.raises(ValueError):
            export_model(TWO, "mps")


def feasible_points(rows_in, text):
    """Every binary x with a y and t completing it to a feasible model point."""
    n, m = len(rows_in), len(rows_in[0])
    rows = parse_rows(text)
    per_item = {i: [family(rows, "link")[i - 1], family(rows, "assign")[i - 1]] for i in range(1, n + 1)}
    xs = [f"x_{i}_{j}" for i in range(1, n + 1) for j in range(1, m + 1)]
    out = []
    for bits in product((0, 1), repeat=len(xs)):
        a = dict(zip(xs, bits))
        if not all(holds(rows[r], a) for r in family(rows, "mono") + family(rows, "tie")):
            continue
        for i in range(1, n + 1):
            ys = [f"y_{i}_{k}" for k in range(m + 1)]
            fits = [ybits for ybits in product((0, 1), repeat=m + 1)
                    if all(holds(rows[r], {**a, **dict(zip(ys, ybits))}) for r in per_item[i])]
            # x fixes y uniquely: the one-hot of the item's crossing count
            assert len(fits) == 1
            a.update(zip(ys, fits[0]))
        for k in range(m + 1):
            a[f"t_{k}"] = sum(a[f"y_{i}_{k}"] for i in range(1, n + 1))
        assert all(holds(rows[r], a) for r in family(rows, "colsum"))
        out.append(a)
    return out


@pytest.mark.parametrize("rows", [
    [[0.0, 1.0], [2.0, 1.0], [1.0, 0.0]],
    [[1.0, 1.0], [1.0, 2.0], [0.0, 2.0], [3.0, 0.0]],
    [[2.0], [2.0], [1.0], [0.0], [2.0]],
])
def test_feasible_set_is_the_valid_grid(rows):
    n, m = len(rows), len(rows[0])
    points = feasible_points(rows, export_iqp(rows))
    got = {}
    for a in points:
        key = tuple(tuple(a[f"x_{i}_{j}"] for i in range(1, n + 1)) for j in range(1, m + 1))
        got[key] = [a[f"t_{k}"] for k in range(m + 1)]
    want = {}
    cols = [[r[j] for r in rows] for j in range(m)]
    for k in oracles.grid(rows):
        key = tuple(tuple(int(oracles.crosses(cols[j], k[j], r[j])) for r in rows) for j in range(m))
        want[key] = oracles.histogram(rows, k)
    assert got == want
    # the quadratic objective and the spread agree with the direct histogram
    for t in got.values():
        assert sum(c * c for c in t) == oracles.sumsq(t)


def test_highs_matches_range_solver(tmp_path):
    highspy = pytest.importorskip("highspy")
    rows = [[3.0, 1.0], [0.0, 4.0], [2.0, 2.0], [1.0, 0.0], [4.0, 3.0], [2.0, 1.0]]
    path = tmp_path / "m.lp"
    path.write_text(export_ilp(rows))
    h = highspy.Highs()
    h.silent()
    h.readModel(str(path))
    h.run()
    assert round(h.getInfo().objective_function_value) == solve_min_range(rows).objective

"""Dataset input/output, the bundled 50-item example and random instances."""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass

import numpy as np

from .core import ScoreMatrix
from .errors import NumericError, ParseError

TABLE1_ROWS = (
    (-1.25, -0.94, -0.53),
    (0.72, 1.10, 0.08),
    (0.67, -0.81, 0.52),
    (-1.36, -2.26, 0.73),
    (0.77, -1.51, -0.57),
    (-0.23, 0.13, 1.30),
    (-0.14, 0.49, 0.06),
    (0.90, -0.07, -0.27),
    (-1.34, 1.82, -0.04),
    (-1.08, 1.08, 0.58),
    (-0.16, 0.09, -0.86),
    (0.21, -0.71, -1.33),
    (0.93, 0.38, -1.31),
    (2.05, 1.06, -1.30),
    (-0.01, 0.28, -0.17),
    (-1.17, 2.32, 1.37),
    (0.38, 0.45, 0.46),
    (0.45, 0.58, 1.28),
    (-0.29, 0.81, 0.88),
    (0.46, -1.14, 0.78),
    (0.65, -0.70, 1.08),
    (-0.88, 0.60, 0.18),
    (2.03, -0.16, 1.61),
    (0.85, -0.74, -1.25),
    (-0.58, -1.22, -0.97),
    (0.58, 0.92, 0.01),
    (-0.55, -0.78, -0.67),
    (-0.70, 0.75, 0.46),
    (0.75, 0.11, 1.78),
    (-0.76, -0.05, 1.06),
    (0.68, -0.58, 0.88),
    (0.15, -1.05, 0.23),
    (-1.07, -0.64, -0.32),
    (1.19, -1.91, -0.41),
    (0.34, -2.33, -0.26),
    (0.46, 1.26, -0.41),
    (0.64, -0.23, 0.13),
    (0.67, 0.30, -1.26),
    (-0.16, 0.25, -0.37),
    (-0.60, -0.19, 0.13),
    (1.22, 0.97, -1.19),
    (0.57, -0.89, 1.62),
    (0.53, -1.22, -0.11),
    (0.17, -0.14, -0.07),
    (1.10, 0.61, 0.31),
    (-1.44, -0.40, -1.13),
    (1.91, 0.00, -1.57),
    (-1.70, -1.14, -0.42),
    (-0.03, 0.85, -0.96),
    (-0.20, 0.22, -0.04),
)

ID_HEADERS = {"id", "item", "item_id", "itemid", "name", "label"}


def demo_table1() -> ScoreMatrix:
    """The 50-item, 3-score example dataset, ids 1..50."""
    return ScoreMatrix.from_rows(TABLE1_ROWS, ids=range(1, len(TABLE1_ROWS) + 1))


def _is_number(cell: str) -> bool:
    try:
        float(cell)
    except ValueError:
        return False
    return True


def parse_csv(text: str, id_column: bool | None = None) -> ScoreMatrix:
    """Parse a score table.

    A first row is taken as a header when one of its score cells (or its only
    cell) is not a number.  The first column holds item ids when the header
    names it ``id``/``item_id``/..., or when the first cell of the first data
    row is not a number.  Rows and columns in error messages are 1-based.
    """
    rows = [(i, [c.strip() for c in row])
            for i, row in enumerate(csv.reader(io.StringIO(text)), start=1)
            if any(c.strip() for c in row)]
    if not rows:
        raise ParseError("no rows found")

    header = None
    first = rows[0][1]
    tail = first[1:] if len(first) > 1 else first
    if not all(_is_number(c) for c in tail):
        header = first
        rows = rows[1:]
        if not rows:
            raise ParseError("header but no data rows")

    if id_column is None:
        if header is not None and header[0].lower() in ID_HEADERS:
            id_column = True
        else:
            id_column = not _is_number(rows[0][1][0])

    width = len(header) if header is not None else len(rows[0][1])
    m = width - 1 if id_column else width
    if m < 1:
        raise ParseError("no score columns", row=rows[0][0])

    ids, values = [], []
    for lineno, row in rows:
        if len(row) != width:
            raise ParseError(f"expected {width} cells, found {len(row)}", row=lineno)
        cells = row[1:] if id_column else row
        out = []
        for col, cell in enumerate(cells, start=2 if id_column else 1):
            try:
                x = float(cell)
            except ValueError:
                raise ParseError(f"non-numeric score {cell!r}", row=lineno, column=col) from None
            if not np.isfinite(x):
                raise ParseError(f"non-finite score {cell!r}", row=lineno, column=col)
            out.append(x)
        values.append(out)
        ids.append(row[0] if id_column else str(len(ids) + 1))
    return ScoreMatrix.from_rows(values, ids=ids)


def read_csv(path) -> ScoreMatrix:
    with open(path, encoding="utf-8", newline="") as fh:
        return parse_csv(fh.read())


def to_csv(S: ScoreMatrix) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["item_id"] + [f"score_{j + 1}" for j in range(S.m)])
    for item_id, row in zip(S.ids, S.values):
        w.writerow([item_id] + [repr(float(x)) for x in row])
    return buf.getvalue()


@dataclass(frozen=True)
class InstanceSpec:
    n: int = 100
    m: int = 3
    seed: int = 0
    scale: float = 100.0

    def __post_init__(self):
        if self.n < 2 or self.m < 1 or not self.scale > 0:
            raise ValueError(f"invalid instance spec {self}")


def round_half_away(x: np.ndarray) -> np.ndarray:
    return np.sign(x) * np.floor(np.abs(x) + 0.5)


def instance_rng(seed: int, index: int = 0, attempt: int = 0) -> np.random.Generator:
    # PCG64 keyed by (seed, instance index, retry) so instances are independent
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed, index, attempt])))


def random_covariance(rng: np.random.Generator, m: int) -> np.ndarray:
    G = rng.standard_normal((m, m))
    return G.T @ G


def generate_instance(spec: InstanceSpec, index: int = 0, max_retries: int = 8) -> ScoreMatrix:
    """Correlated Gaussian scores, scaled and rounded to integers.

    Returns the matrix; the covariance used is available through
    :func:`generate_instance_with_cov`.
    """
    return generate_instance_with_cov(spec, index, max_retries)[0]


def generate_instance_with_cov(spec: InstanceSpec, index: int = 0, max_retries: int = 8):
    for attempt in range(max_retries):
        rng = instance_rng(spec.seed, index, attempt)
        cov = random_covariance(rng, spec.m)
        try:
            L = np.linalg.cholesky(cov)
        except np.linalg.LinAlgError:
            continue
        if np.min(np.diag(L)) <= 1e-8 * np.sqrt(np.max(np.diag(cov))):
            continue
        Z = rng.standard_normal((spec.n, spec.m))
        X = round_half_away(spec.scale * (Z @ L.T))
        return ScoreMatrix.from_rows(X), cov
    raise NumericError(
        f"could not draw a non-singular covariance after {max_retries} attempts")

import os
import sys

import pytest
from hypothesis import strategies as st

sys.path.insert(0, os.path.dirname(__file__))

from optcut.data import demo_table1  # noqa: E402


@pytest.fixture(scope="session")
def table1():
    return demo_table1()


@st.composite
def small_instances(draw, max_n=12, max_m=3, alphabet=5, min_n=2):
    n = draw(st.integers(min_n, max_n))
    m = draw(st.integers(1, max_m))
    cell = st.integers(0, alphabet - 1)
    return [[float(draw(cell)) for _ in range(m)] for _ in range(n)]


@pytest.fixture
def verdict(request):
    """Record one pass/fail line per acceptance criterion for the run summary."""
    lines = request.config.__dict__.setdefault("_acceptance_lines", [])

    def record(label, ok, detail=""):
        lines.append(f"{'PASS' if ok else 'FAIL'}  {label}  {detail}".rstrip())
        return ok
    return record


def pytest_terminal_summary(terminalreporter, config):
    lines = getattr(config, "_acceptance_lines", [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)

from __future__ import annotations

from math import comb

import numpy as np
import pytest
from hypothesis import settings, strategies as st

from vmlab.f2core import F2Matrix
from vmlab.graph import Graph

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")


@st.composite
def graphs(draw, min_n=0, max_n=8):
    n = draw(st.integers(min_n, max_n))
    mask = draw(st.integers(0, (1 << comb(n, 2)) - 1)) if n > 1 else 0
    return Graph.from_edge_bitmask(mask, n)


@st.composite
def matrices(draw, max_rows=10, max_cols=10, square=False):
    r = draw(st.integers(0, max_rows))
    c = r if square else draw(st.integers(0, max_cols))
    rows = [draw(st.integers(0, (1 << c) - 1)) for _ in range(r)]
    return F2Matrix(r, c, rows)


def random_graph(rng: np.random.Generator, n: int, p: float, labels=None) -> Graph:
    a = np.triu(rng.random((n, n)) < p, 1)
    a = a | a.T
    return Graph(F2Matrix.from_array(a), labels)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)

import sys
from fractions import Fraction
from itertools import permutations

import pytest
from hypothesis import strategies as st

from laddermat.ladder import Ladder
from laddermat.linalg import RationalMatrix


def grid_minus(m, n, holes):
    return Ladder.from_cells([(i, j) for i in range(1, m + 1) for j in range(1, n + 1) if (i, j) not in holes])


@pytest.fixture
def eight_cell():
    """[3]x[3] without the top-right corner."""
    return grid_minus(3, 3, {(1, 3)})


@pytest.fixture
def staircase7():
    return grid_minus(3, 3, {(1, 3), (3, 1)})


def leibniz_det(rows):
    """Permutation-sum determinant, an oracle independent of elimination."""
    n = len(rows)
    total = Fraction(0)
    for p in permutations(range(n)):
        inv = sum(p[a] > p[b] for a in range(n) for b in range(a + 1, n))
        term = Fraction(-1 if inv % 2 else 1)
        for i in range(n):
            term *= rows[i][p[i]]
        total += term
    return total


fractions = st.builds(Fraction, st.integers(-20, 20), st.integers(1, 6))


@st.composite
def matrices(draw, max_rows=4, max_cols=4, square=False):
    m = draw(st.integers(1, max_rows))
    n = m if square else draw(st.integers(1, max_cols))
    rows = draw(st.lists(st.lists(fractions, min_size=n, max_size=n), min_size=m, max_size=m))
    return RationalMatrix.from_rows(rows)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if results:
        terminalreporter.section("acceptance criteria")
        for n in sorted(results):
            terminalreporter.write_line(results[n])

from fractions import Fraction
from itertools import combinations, product

import pytest
from hypothesis import given, settings, strategies as st

from conftest import grid_minus
from laddermat.errors import DomainError, ValidationError
from laddermat.ladder import (
    CellSet,
    Ladder,
    corners_decompose,
    enumerate_ladders,
    find_axiom_violation,
    is_ladder,
    ladder_col,
    ladder_rank,
    ladder_row,
    max_square,
    shape,
    shrink,
    subcritical_cells,
    variety_dim,
)
from laddermat.linalg import RationalMatrix, minor, rank


def full(m, n):
    return CellSet.full(m, n)


def minus(m, n, holes):
    return CellSet(m, n, full(m, n).cells - set(holes))


def rect_oracle(L, t):
    """Every t x t index pair with the whole rectangle in L, by brute force."""
    return [(I, J) for I in combinations(range(1, L.m + 1), t) for J in combinations(range(1, L.n + 1), t)
            if all((i, j) in L for i, j in product(I, J))]


def max_square_oracle(L):
    return max(t for t in range(1, min(L.m, L.n) + 1) if t == 1 or rect_oracle(L, t))


def ladder_rank_oracle(X, L):
    # largest t with an invertible t x t submatrix supported in L
    best = 0
    for t in range(1, min(L.m, L.n) + 1):
        if any(minor(X, I, J) != 0 for I, J in rect_oracle(L, t)):
            best = t
    return best


def test_is_ladder_examples():
    assert is_ladder(full(3, 3))
    assert is_ladder(minus(3, 3, [(1, 3)]))
    assert not is_ladder(minus(3, 3, [(2, 2)]))


def test_axiom_violation_names_the_pair():
    p, q, missing = find_axiom_violation(minus(3, 3, [(2, 2)]))
    assert missing == (2, 2)
    with pytest.raises(ValidationError, match=r"\(2, 2\)"):
        corners_decompose(minus(3, 3, [(2, 2)]))


def test_sets_with_holes_are_rejected():
    # the corner axiom alone accepts this set; the missing middle cells make it no ladder
    S = CellSet(3, 3, frozenset({(1, 1), (1, 3), (3, 1), (3, 3)}))
    assert find_axiom_violation(S) is None
    assert not is_ladder(S)


def test_endpoints_required():
    assert not is_ladder(minus(2, 2, [(1, 1)]))
    assert not is_ladder(minus(2, 2, [(2, 2)]))


def test_disconnected_diagonal_is_a_ladder():
    L = corners_decompose(CellSet(2, 2, frozenset({(1, 1), (2, 2)})))
    assert L.upper == ((1, 1), (2, 2)) and L.lower == ((1, 1), (2, 2))


def test_corner_examples():
    L = corners_decompose(full(4, 5))
    assert L.upper == ((1, 5),) and L.lower == ((4, 1),)
    L = corners_decompose(minus(3, 3, [(1, 3)]))
    assert L.upper == ((1, 2), (2, 3)) and L.lower == ((3, 1),)
    L = corners_decompose(full(2, 2))
    assert L.upper == ((1, 2),) and L.lower == ((2, 1),)


def test_from_corners_rejects_bad_orders():
    with pytest.raises(ValidationError):
        Ladder.from_corners(3, 3, [(2, 3)], [(3, 1)])
    with pytest.raises(ValidationError):
        Ladder.from_corners(3, 3, [(1, 2), (2, 3)], [(3, 1), (3, 2)])


def test_shape_examples(eight_cell):
    assert shape(Ladder.trivial(2, 2)).to_rows() == [[1, 1], [1, 1]]
    assert shape(eight_cell).to_rows() == [[1, 1, 0], [1, 1, 1], [1, 1, 1]]
    assert shape(Ladder.trivial(1, 4)).to_rows() == [[1, 1, 1, 1]]


def test_ladder_rows(eight_cell):
    assert ladder_row(Ladder.trivial(3, 3), 2) == (1, 2, 3)
    assert ladder_row(eight_cell, 1) == (1, 2)
    assert ladder_row(eight_cell, 3) == (1, 2, 3)
    assert ladder_col(eight_cell, 3) == (2, 3)


def test_max_square_examples(eight_cell):
    assert max_square(Ladder.trivial(3, 5)) == 3
    # no 3x3 rectangle avoids (1, 3)
    assert max_square(eight_cell) == 2
    assert max_square(Ladder.from_cells([(1, 1), (2, 1), (2, 2)])) == 1


def test_subcritical_examples():
    assert not subcritical_cells(Ladder.trivial(3, 4), 3).cells
    assert not subcritical_cells(grid_minus(3, 3, {(1, 3)}), 1).cells
    stair = Ladder.from_cells([(1, 1), (2, 1), (2, 2), (3, 2), (3, 3)])
    assert subcritical_cells(stair, 2).cells == stair.cells
    # cells of the 8-cell ladder outside every 2x2 rectangle: none
    assert not subcritical_cells(grid_minus(3, 3, {(1, 3)}), 2).cells


def test_shrink_examples(eight_cell):
    assert shrink(Ladder.trivial(3, 3), 1).cells == {(1, 2), (1, 3), (2, 2), (2, 3)}
    assert shrink(eight_cell, 1).cells == {(1, 2), (2, 2), (2, 3)}


def test_variety_dim_examples(eight_cell):
    assert variety_dim(Ladder.trivial(3, 3), 1) == 5
    assert variety_dim(eight_cell, 1) == 5
    with pytest.raises(ValueError):
        variety_dim(eight_cell, 2)


@pytest.mark.parametrize("m,n", [(m, n) for m in range(1, 7) for n in range(1, 7)])
def test_trivial_variety_dim_formula(m, n):
    L = Ladder.trivial(m, n)
    for r in range(1, min(m, n)):
        assert variety_dim(L, r) == r * (m + n - r)
        # the shrunken ladder is the top-right (m-r) x (n-r) block
        assert shrink(L, r).cells == set(product(range(1, m - r + 1), range(r + 1, n + 1)))


def _corner_chains(m, n):
    """Independent ladder enumeration from strictly increasing corner chains."""
    rows_mid = range(2, m + 1)
    for k in range(1, min(m, n) + 1):
        for a in combinations(rows_mid, k - 1):
            for b in combinations(range(1, n), k - 1):
                yield (1,) + a, b + (n,)


def _ladders_from_corners(m, n):
    found = set()
    for a, b in _corner_chains(m, n):
        for c_rev, d_rev in _corner_chains(n, m):
            # lower chain: columns from 1, rows ending at m
            upper = list(zip(a, b))
            lower = list(zip(d_rev, c_rev))
            try:
                L = Ladder.from_corners(m, n, upper, lower)
            except ValidationError:
                continue
            found.add(L.cells)
    return found


@pytest.mark.parametrize("m,n,count", [(2, 2, 4), (2, 3, 9), (3, 3, 34), (3, 4, 91)])
def test_enumerate_ladders_counts(m, n, count):
    ladders = enumerate_ladders(m, n)
    assert len(ladders) == count
    assert {L.cells for L in ladders} == _ladders_from_corners(m, n)


def test_enumerate_4x4_count():
    assert len(enumerate_ladders(4, 4)) == 341


@pytest.mark.parametrize("m,n", [(2, 2), (2, 3), (3, 3), (3, 4), (4, 3), (4, 4)])
def test_corner_round_trip(m, n):
    for L in enumerate_ladders(m, n):
        again = Ladder.from_corners(m, n, L.upper, L.lower)
        assert again == L and again.cells == L.cells
        assert corners_decompose(L.cellset()) == L
        assert max_square(L) == max_square_oracle(L)
        assert sorted(L.rectangles(2)) == rect_oracle(L, 2)


def test_ladder_rank_examples():
    L = Ladder.from_cells([(1, 1), (2, 1), (2, 2)])
    X = RationalMatrix.from_rows([[1, 0], [2, 3]])
    assert ladder_rank(X, L) == 1
    assert ladder_rank(RationalMatrix.zeros(3, 3), grid_minus(3, 3, {(1, 3)})) == 0


def test_ladder_rank_rejects_outside_support(eight_cell):
    X = RationalMatrix.from_rows([[1, 2, 3], [4, 5, 6], [7, 8, 9]])
    with pytest.raises(DomainError):
        ladder_rank(X, eight_cell)


cells_3x4 = enumerate_ladders(3, 4)


@settings(max_examples=200, deadline=None)
@given(st.sampled_from(cells_3x4), st.lists(st.integers(-3, 3), min_size=12, max_size=12))
def test_ladder_rank_matches_definition(L, vals):
    rows = [[vals[4 * i + j] if (i + 1, j + 1) in L else 0 for j in range(4)] for i in range(3)]
    X = RationalMatrix.from_rows(rows)
    got = ladder_rank(X, L)
    assert got == ladder_rank_oracle(X, L)
    assert got <= rank(X) and got <= max_square(L)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 4), st.integers(1, 4), st.lists(st.integers(-5, 5), min_size=16, max_size=16))
def test_trivial_ladder_rank_is_rank(m, n, vals):
    X = RationalMatrix.from_rows([[Fraction(vals[4 * i + j], 2) for j in range(n)] for i in range(m)])
    assert ladder_rank(X, Ladder.trivial(m, n)) == rank(X)

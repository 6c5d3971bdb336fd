from fractions import Fraction
from itertools import permutations

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import grid_minus
from laddermat.errors import PreconditionError, ResourceError
from laddermat.ladder import Ladder, ladder_rank, max_square
from laddermat.linalg import RationalMatrix, rank
from laddermat.recovery import (
    CellPermutation,
    apply,
    build_system,
    classify,
    enumerate_rank_preserving,
    is_generic_low_rank,
    power_sum,
    power_sum_polynomial,
    random_ladder_low_rank,
    random_low_rank,
    random_permutation,
    recover,
    same_multiset,
    spawn_seeds,
    system_check_point,
    system_dim,
    system_summary,
    system_zero_dimensional,
    transpose_permutation,
    trivial_class_matrices,
    verify_uniqueness,
)
from laddermat.determinantal import VariableGrid

M = RationalMatrix.from_rows
L22 = Ladder.trivial(2, 2)
L33 = Ladder.trivial(3, 3)


def anti_transpose(L):
    """(i, j) -> (n+1-j, m+1-i); maps the 8-cell ladder onto itself."""
    return CellPermutation(L, tuple(((i, j), (L.n + 1 - j, L.m + 1 - i)) for i, j in L.cells))


# -- permutations ------------------------------------------------------------

def test_apply_examples():
    X = M([[1, 2], [3, 4]])
    assert apply(CellPermutation.identity(L22), X) == X
    cycle = CellPermutation.from_dict(L22, {(1, 1): (1, 2), (1, 2): (2, 2), (2, 2): (2, 1), (2, 1): (1, 1)})
    assert apply(cycle, X).to_rows() == [[3, 1], [4, 2]]
    assert apply(cycle, apply(cycle.inverse(), X)) == X


def test_bijection_required():
    with pytest.raises(ValueError):
        CellPermutation(L22, (((1, 1), (1, 2)), ((1, 2), (1, 2)), ((2, 1), (2, 1)), ((2, 2), (2, 2))))


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2**32), st.integers(0, 2**32))
def test_group_law(s1, s2):
    L = grid_minus(3, 3, {(1, 3)})
    X = M([[1, 2, 0], [3, 4, 5], [6, 7, 8]])
    p, q = random_permutation(L, s1), random_permutation(L, s2)
    assert apply(p * q, X) == apply(p, apply(q, X))
    assert (p * p.inverse()).is_identity()


def test_classify_examples():
    X = random_low_rank(3, 3, 1, 0)
    assert classify(CellPermutation.identity(L33), X, L33, 1) == "row_col_perm"
    row_swap = CellPermutation.from_dict(L33, {**{(1, j): (2, j) for j in (1, 2, 3)},
                                               **{(2, j): (1, j) for j in (1, 2, 3)}})
    assert classify(row_swap, X, L33, 1) == "row_col_perm"
    assert classify(transpose_permutation(L33), X, L33, 1) == "transpose"
    assert classify(CellPermutation.swap(L33, (1, 2), (2, 1)), X, L33, 1) == "none"


def test_classify_needs_distinct_entries():
    with pytest.raises(PreconditionError):
        classify(CellPermutation.identity(L22), M([[1, 2], [2, 4]]), L22, 1)


# -- enumeration ---------------------------------------------------------------

def _brute_force_count(X, L, r):
    cells = L.sorted_cells()
    vals = [X[c] for c in cells]
    count = 0
    for p in permutations(range(len(cells))):
        Y = X.replace({cells[k]: vals[p[k]] for k in range(len(cells))})
        count += ladder_rank(Y, L) <= r
    return count


def test_enumeration_examples():
    X = M([[1, 2], [2, 4]])
    perms = enumerate_rank_preserving(X, L22, 1)
    assert len(perms) == 8 == _brute_force_count(X, L22, 1)
    assert any(p.is_identity() for p in perms)
    full = M([[1, 2], [3, 5]])
    assert len(enumerate_rank_preserving(full, L22, 2)) == 24


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_enumeration_matches_brute_force(seed):
    L = Ladder.trivial(2, 3)
    X = random_low_rank(2, 3, 1, seed)
    perms = enumerate_rank_preserving(X, L, 1)
    assert len(perms) == _brute_force_count(X, L, 1)
    for p in perms:
        assert ladder_rank(apply(p, X), L) <= 1


def test_enumeration_errors():
    X = M([[1, 2], [3, 5]])
    with pytest.raises(PreconditionError):
        enumerate_rank_preserving(X, L22, 1)
    L = Ladder.trivial(3, 4)
    with pytest.raises(ResourceError):
        enumerate_rank_preserving(random_low_rank(3, 4, 1, 0), L, 1)


def test_parallel_enumeration_matches_serial():
    X = random_low_rank(3, 3, 1, 4)
    serial = enumerate_rank_preserving(X, L33, 1)
    assert enumerate_rank_preserving(X, L33, 1, workers=2) == serial


@pytest.mark.parametrize("m,n,count,hist", [
    (2, 2, 8, {"row_col_perm": 4, "transpose": 4}),
    (2, 3, 12, {"row_col_perm": 12}),
    (3, 3, 72, {"row_col_perm": 36, "transpose": 36}),
])
def test_uniqueness_counts(m, n, count, hist):
    for seed in (0, 1):
        rep = verify_uniqueness(random_low_rank(m, n, 1, seed), Ladder.trivial(m, n), 1)
        assert rep.preserving_count == count and rep.classes == hist and rep.unique


def test_anti_transpose_preserves_ladder_rank(eight_cell):
    # the 8-cell ladder is symmetric about its anti-diagonal, and the
    # anti-transpose maps rectangles in L to rectangles in L, so it keeps
    # ladder-rank for every X without being a row/column move
    pi = anti_transpose(eight_cell)
    for seed in range(5):
        X = random_ladder_low_rank(eight_cell, 1, seed)
        Y = apply(pi, X)
        assert ladder_rank(Y, eight_cell) == 1
        assert classify(pi, X, eight_cell, 1) == "none"


def test_eight_cell_counterexample_frozen(eight_cell):
    X = random_ladder_low_rank(eight_cell, 1, 0)
    rep = verify_uniqueness(X, eight_cell, 1)
    assert rep.preserving_count == 8
    assert rep.classes == {"none": 4, "row_col_perm": 4}
    assert not rep.unique


def test_recover_scrambled_matrix():
    X = random_low_rank(3, 3, 1, 5)
    Y = apply(random_permutation(L33, 9), X)
    found = recover(Y, L33, 1)
    assert X in found and len(found) == 72
    assert set(found) == set(trivial_class_matrices(X, L33, 1))


# -- power sums ---------------------------------------------------------------

def test_power_sum_examples():
    X = M([[1, 2], [3, 4]])
    assert power_sum(X, L22, 1) == 10
    assert power_sum(X, L22, 2) == 30


def test_power_sum_polynomials():
    g = VariableGrid(L22)
    X = M([[1, 2], [2, 4]])
    p1 = power_sum_polynomial(g, 1) - power_sum(X, L22, 1)
    p2 = power_sum_polynomial(g, 2) - power_sum(X, L22, 2)
    assert g.format(p1) == "z11 + z12 + z21 + z22 - 9"
    assert g.format(p2) == "z11^2 + z12^2 + z21^2 + z22^2 - 25"
    pt = g.point(X)
    assert p1.evaluate(pt) == 0 and p2.evaluate(pt) == 0


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2**32), st.lists(st.integers(-9, 9), min_size=8, max_size=8))
def test_power_sums_invariant(seed, vals):
    L = grid_minus(3, 3, {(1, 3)})
    X = RationalMatrix.zeros(3, 3).replace(dict(zip(L.sorted_cells(), vals)))
    Y = apply(random_permutation(L, seed), X)
    assert same_multiset(X, Y, L)
    assert all(power_sum(X, L, nu) == power_sum(Y, L, nu) for nu in range(1, 9))


def test_same_multiset_examples():
    X = M([[1, 2], [3, 4]])
    assert same_multiset(X, apply(random_permutation(L22, 3), X), L22)
    assert not same_multiset(X, X.replace({(1, 1): 2}), L22)
    L = Ladder.trivial(1, 3)
    A, B = M([[1, 2, 3]]), M([[0, 3, 3]])
    assert power_sum(A, L, 1) == power_sum(B, L, 1)
    assert power_sum(A, L, 2) != power_sum(B, L, 2)
    assert not same_multiset(A, B, L)


# -- polynomial systems -----------------------------------------------------------

def test_combo_counts(eight_cell):
    X = random_low_rank(3, 3, 1, 0)
    assert len(build_system(X, L33, 1, 0).combos) == 6
    assert len(build_system(random_low_rank(2, 2, 1, 0), L22, 1, 0).combos) == 4
    assert len(build_system(random_ladder_low_rank(eight_cell, 1, 0), eight_cell, 1, 0).combos) == 6
    assert system_dim(L22, 2) == 4


def test_system_check_point():
    X = random_low_rank(3, 3, 1, 2)
    system = build_system(X, L33, 1, 0)
    assert system_check_point(system, X)
    for Z in trivial_class_matrices(X, L33, 1):
        assert system_check_point(system, Z)
    broken = apply(CellPermutation.swap(L33, (1, 1), (2, 3)), X)
    assert rank(broken) > 1
    assert not system_check_point(system, broken)


def test_system_dimension_drops_one_per_combo():
    X = M([[1, 2], [2, 4]])
    dims = [system_summary(build_system(X, L22, 1, 11, n_combos=k))["dimension"] for k in (1, 2, 3)]
    assert dims == [2, 1, 0]


def test_system_solution_counts_frozen():
    X = M([[1, 2], [2, 4]])
    # d = 3 combinations already cut down to points, but more of them than the trivial class
    assert system_summary(build_system(X, L22, 1, 11, n_combos=3))["solutions"] == 48
    assert system_summary(build_system(X, L22, 1, 11))["solutions"] == 8


def test_system_zero_dimensional_default():
    X = random_low_rank(2, 2, 1, 3)
    assert system_zero_dimensional(build_system(X, L22, 1, 5))


def test_degenerate_full_power_sum_system():
    X = random_low_rank(2, 2, 2, 7)
    system = build_system(X, L22, 2, 1)
    assert len(system.combos) == 5
    summary = system_summary(system)
    assert summary["zero_dimensional"] and summary["solutions"] == 24


def test_system_variable_cap():
    X = random_low_rank(3, 3, 1, 0)
    with pytest.raises(ResourceError):
        system_zero_dimensional(build_system(X, L33, 1, 0))


# -- sampling --------------------------------------------------------------------

def test_sampler_screens():
    # repeated entries and X.T == X put this rank-one example on a special locus
    assert rank(M([[1, 2], [2, 4]])) == 1
    assert not is_generic_low_rank(M([[1, 2], [2, 4]]), 1)
    assert is_generic_low_rank(M([[1, 3], [2, 6]]), 1)
    assert not is_generic_low_rank(M([[0, 0], [2, 6]]), 2)


def test_sampler_determinism():
    a = random_low_rank(3, 3, 2, 123)
    assert a == random_low_rank(3, 3, 2, 123)
    assert a != random_low_rank(3, 3, 2, 124)
    assert rank(a) == 2
    s1 = [s.generate_state(1)[0] for s in spawn_seeds(5, 3)]
    s2 = [s.generate_state(1)[0] for s in spawn_seeds(np.random.SeedSequence(5), 3)]
    assert s1 == s2 and len(set(s1)) == 3


def test_ladder_sampler(eight_cell):
    assert random_ladder_low_rank(L33, 1, 8) == random_low_rank(3, 3, 1, 8)
    for seed in range(10):
        X = random_ladder_low_rank(eight_cell, 1, seed)
        assert ladder_rank(X, eight_cell) == 1
        assert X[1, 3] == 0
        assert all(X[c] != 0 for c in eight_cell.cells)
    with pytest.raises(ValueError):
        random_ladder_low_rank(eight_cell, 2, 0)

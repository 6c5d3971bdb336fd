"""Ladder combinatorics.

A ladder is a subset of the ``m x n`` grid (1-based cells ``(i, j)``) closed
under the corner rule: if ``(i, j)`` and ``(k, l)`` are in it with ``i <= k``
and ``j >= l``, then so are ``(k, j)`` and ``(i, l)``. Ladders are stored by
their outside corners; a cell ``(i, j)`` belongs to the ladder iff there is
an upper corner ``(a, b)`` with ``a <= i, j <= b`` and a lower corner
``(c, d)`` with ``i <= c, d <= j``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations, product
from typing import Iterable, Iterator

from .errors import DomainError, ValidationError
from .linalg import RationalMatrix, integer_rank, _integer_rows

Cell = tuple[int, int]


@dataclass(frozen=True)
class CellSet:
    """A raw subset of the ``m x n`` grid."""

    m: int
    n: int
    cells: frozenset[Cell]

    def __post_init__(self):
        object.__setattr__(self, "cells", frozenset((int(i), int(j)) for i, j in self.cells))
        for i, j in self.cells:
            if not (1 <= i <= self.m and 1 <= j <= self.n):
                raise ValidationError(f"cell ({i}, {j}) outside the {self.m}x{self.n} grid")

    def __len__(self):
        return len(self.cells)

    def __contains__(self, cell):
        return tuple(cell) in self.cells

    def __iter__(self):
        return iter(sorted(self.cells))

    @classmethod
    def full(cls, m: int, n: int) -> "CellSet":
        return cls(m, n, frozenset(product(range(1, m + 1), range(1, n + 1))))


def _corner_members(m, n, upper, lower) -> frozenset[Cell]:
    return frozenset(
        (i, j)
        for i in range(1, m + 1)
        for j in range(1, n + 1)
        if any(a <= i and j <= b for a, b in upper)
        and any(i <= c and d <= j for c, d in lower)
    )


@dataclass(frozen=True)
class Ladder:
    """Ladder given by upper corners ``(a_u, b_u)`` and lower corners ``(c_l, d_l)``.

    The plain constructor does no validation so that shrunken ladders, which
    may miss ``(1, 1)`` or ``(m, n)``, can be represented. Use
    :meth:`from_corners`, :meth:`from_cells` or :meth:`trivial` for checked
    construction.
    """

    m: int
    n: int
    upper: tuple[Cell, ...]
    lower: tuple[Cell, ...]
    _cells: frozenset[Cell] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "upper", tuple((int(a), int(b)) for a, b in self.upper))
        object.__setattr__(self, "lower", tuple((int(c), int(d)) for c, d in self.lower))
        object.__setattr__(self, "_cells", _corner_members(self.m, self.n, self.upper, self.lower))

    @classmethod
    def trivial(cls, m: int, n: int) -> "Ladder":
        return cls(m, n, ((1, n),), ((m, 1),))

    @classmethod
    def from_corners(cls, m: int, n: int, upper: Iterable[Cell], lower: Iterable[Cell]) -> "Ladder":
        upper = [tuple(u) for u in upper]
        lower = [tuple(x) for x in lower]
        _check_corner_order(m, n, upper, lower)
        lad = cls(m, n, tuple(upper), tuple(lower))
        if (1, 1) not in lad or (m, n) not in lad:
            raise ValidationError("ladder must contain (1, 1) and (m, n)")
        if corners_decompose(lad.cellset()) != lad:
            raise ValidationError(f"corner lists are not the outside corners of their ladder: {upper}, {lower}")
        return lad

    @classmethod
    def from_cells(cls, cells: Iterable[Cell], m: int | None = None, n: int | None = None) -> "Ladder":
        cells = frozenset(tuple(c) for c in cells)
        if m is None:
            m = max(i for i, _ in cells)
        if n is None:
            n = max(j for _, j in cells)
        return corners_decompose(CellSet(m, n, cells))

    @property
    def cells(self) -> frozenset[Cell]:
        return self._cells

    def cellset(self) -> CellSet:
        return CellSet(self.m, self.n, self._cells)

    def __contains__(self, cell) -> bool:
        return tuple(cell) in self._cells

    def __len__(self) -> int:
        return len(self._cells)

    def sorted_cells(self) -> list[Cell]:
        """Cells in row-major order."""
        return sorted(self._cells)

    @property
    def is_trivial(self) -> bool:
        return len(self._cells) == self.m * self.n

    @cached_property
    def row_supports(self) -> tuple[tuple[int, ...], ...]:
        return tuple(ladder_row(self, i) for i in range(1, self.m + 1))

    @cached_property
    def col_supports(self) -> tuple[tuple[int, ...], ...]:
        return tuple(ladder_col(self, j) for j in range(1, self.n + 1))

    def rectangles(self, t: int) -> Iterator[tuple[tuple[int, ...], tuple[int, ...]]]:
        """All ``t x t`` index pairs ``(I, J)`` with ``I x J`` inside the ladder."""
        sup = [set(s) for s in self.row_supports]
        for I in combinations(range(1, self.m + 1), t):
            common = set.intersection(*(sup[i - 1] for i in I))
            if len(common) < t:
                continue
            for J in combinations(sorted(common), t):
                yield I, J

    def is_symmetric(self) -> bool:
        """True when the shape is invariant under transposition."""
        return self.m == self.n and all((j, i) in self._cells for i, j in self._cells)

    def to_dict(self) -> dict:
        return {"m": self.m, "n": self.n,
                "upper": [list(c) for c in self.upper],
                "lower": [list(c) for c in self.lower]}


def _check_corner_order(m, n, upper, lower):
    if not upper or not lower:
        raise ValidationError("a ladder needs at least one upper and one lower corner")
    a = [u[0] for u in upper]
    b = [u[1] for u in upper]
    c = [x[0] for x in lower]
    d = [x[1] for x in lower]
    if a[0] != 1 or any(x >= y for x, y in zip(a, a[1:])) or a[-1] > m:
        raise ValidationError(f"upper corner rows must satisfy 1 = a_1 < ... <= m, got {a}")
    if b[0] < 1 or any(x >= y for x, y in zip(b, b[1:])) or b[-1] != n:
        raise ValidationError(f"upper corner columns must satisfy 1 <= b_1 < ... = n, got {b}")
    if c[0] < 1 or any(x >= y for x, y in zip(c, c[1:])) or c[-1] != m:
        raise ValidationError(f"lower corner rows must increase to m, got {c}")
    if d[0] != 1 or any(x >= y for x, y in zip(d, d[1:])) or d[-1] > n:
        raise ValidationError(f"lower corner columns must satisfy 1 = d_1 < ... <= n, got {d}")


def find_axiom_violation(S: CellSet) -> tuple[Cell, Cell, Cell] | None:
    """Return ``(p, q, missing)`` for the first pair breaking the corner rule."""
    cells = sorted(S.cells)
    for (i, j) in cells:
        for (k, l) in cells:
            if i <= k and j >= l:
                for forced in ((k, j), (i, l)):
                    if forced not in S.cells:
                        return (i, j), (k, l), forced
    return None


def _outside_corners(cells: frozenset[Cell]) -> tuple[list[Cell], list[Cell]]:
    # upper: cells with no other cell weakly above-and-right; lower: none weakly below-and-left
    upper = [p for p in cells
             if not any(q != p and q[0] <= p[0] and q[1] >= p[1] for q in cells)]
    lower = [p for p in cells
             if not any(q != p and q[0] >= p[0] and q[1] <= p[1] for q in cells)]
    return sorted(upper), sorted(lower)


def validate_cells(S: CellSet) -> None:
    """Raise :class:`ValidationError` naming the first violated ladder condition."""
    if (1, 1) not in S.cells or (S.m, S.n) not in S.cells:
        raise ValidationError(f"a ladder must contain (1, 1) and ({S.m}, {S.n})")
    bad = find_axiom_violation(S)
    if bad is not None:
        p, q, missing = bad
        raise ValidationError(f"cells {p} and {q} are in the set but {missing} is not")
    upper, lower = _outside_corners(S.cells)
    closure = _corner_members(S.m, S.n, upper, lower)
    holes = sorted(closure - S.cells)
    if holes:
        raise ValidationError(f"cell {holes[0]} lies between outside corners but is missing")


def is_ladder(S: CellSet) -> bool:
    try:
        validate_cells(S)
    except ValidationError:
        return False
    return True


def corners_decompose(S: CellSet) -> Ladder:
    """Outside corners of a ladder given as a raw cell set."""
    validate_cells(S)
    upper, lower = _outside_corners(S.cells)
    return Ladder(S.m, S.n, tuple(upper), tuple(lower))


def shape(L: Ladder) -> RationalMatrix:
    """The 0/1 indicator matrix of the ladder."""
    return RationalMatrix.from_rows(
        [[int((i, j) in L) for j in range(1, L.n + 1)] for i in range(1, L.m + 1)]
    )


def ladder_row(L: Ladder, i: int) -> tuple[int, ...]:
    """Columns of row ``i`` inside the ladder, increasing. Empty if none."""
    if not 1 <= i <= L.m:
        raise IndexError(f"row {i} out of range 1..{L.m}")
    return tuple(j for j in range(1, L.n + 1) if (i, j) in L)


def ladder_col(L: Ladder, j: int) -> tuple[int, ...]:
    if not 1 <= j <= L.n:
        raise IndexError(f"column {j} out of range 1..{L.n}")
    return tuple(i for i in range(1, L.m + 1) if (i, j) in L)


def max_square(L: Ladder) -> int:
    """Largest ``t`` such that some ``t x t`` rectangle lies in the ladder."""
    best = 0
    for t in range(1, min(L.m, L.n) + 1):
        if next(L.rectangles(t), None) is None:
            break
        best = t
    return best


def subcritical_cells(L: Ladder, r: int) -> CellSet:
    """Cells of ``L`` contained in no ``r x r`` rectangle inside ``L``.

    For ``r > r(L)`` no such rectangle exists and every cell qualifies.
    """
    if r < 1:
        raise ValueError(f"r={r} must be positive")
    covered = set()
    for I, J in L.rectangles(r):
        covered.update(product(I, J))
    return CellSet(L.m, L.n, L.cells - covered)


def shrink(L: Ladder, r: int) -> Ladder:
    """Same upper corners, lower corners moved to ``(c - r, d + r)``.

    Shifted corners leaving the grid are dropped; if none survive the result
    is empty.
    """
    lower = tuple((c - r, d + r) for c, d in L.lower if c - r >= 1 and d + r <= L.n)
    return Ladder(L.m, L.n, L.upper, lower)


def variety_dim(L: Ladder, r: int) -> int:
    """Dimension of the variety of ladder matrices with ladder-rank at most ``r``."""
    rl = max_square(L)
    if not 1 <= r < rl:
        raise ValueError(f"need 1 <= r < r(L) = {rl}, got r={r}")
    return len(L) - len(shrink(L, r))


def check_support(X: RationalMatrix, L: Ladder) -> None:
    if X.shape != (L.m, L.n):
        raise DomainError(f"matrix is {X.rows}x{X.cols} but the ladder is {L.m}x{L.n}")
    for i in range(1, L.m + 1):
        for j in range(1, L.n + 1):
            if (i, j) not in L and X[i, j] != 0:
                raise DomainError(f"entry ({i}, {j}) = {X[i, j]} lies outside the ladder")


def ladder_rank(X: RationalMatrix, L: Ladder) -> int:
    """Largest rank of a submatrix of ``X`` whose rectangle lies inside ``L``.

    For each row subset the widest admissible rectangle uses every column
    shared by those rows; its rank dominates all narrower rectangles, so the
    maximum over row subsets is exact.
    """
    check_support(X, L)
    rows, _ = _integer_rows(X)
    cap = max_square(L)
    sup = [set(s) for s in L.row_supports]
    best = 0
    for size in range(1, L.m + 1):
        for I in combinations(range(L.m), size):
            common = sorted(set.intersection(*(sup[i] for i in I)))
            if len(common) <= best or size <= best:
                continue
            sub = [[rows[i][j - 1] for j in common] for i in I]
            best = max(best, integer_rank(sub))
            if best == cap:
                return best
    return best


def enumerate_ladders(m: int, n: int) -> list[Ladder]:
    """Every ladder in the ``m x n`` grid, by exhaustive subset search."""
    grid = sorted(CellSet.full(m, n).cells)
    inner = [c for c in grid if c not in ((1, 1), (m, n))]
    out = []
    for mask in range(1 << len(inner)):
        cells = {(1, 1), (m, n)}
        cells.update(c for k, c in enumerate(inner) if mask >> k & 1)
        S = CellSet(m, n, frozenset(cells))
        if is_ladder(S):
            out.append(corners_decompose(S))
    out.sort(key=lambda L: (len(L), L.sorted_cells()))
    return out

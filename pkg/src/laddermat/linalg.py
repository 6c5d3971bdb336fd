"""Exact rational matrices and fraction-free elimination.

Entries are :class:`fractions.Fraction`, which already keeps numerator and
denominator reduced with a positive denominator. Indices are 1-based
throughout the package: ``M[1, 1]`` is the top-left entry.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Iterable, Sequence

from .errors import DimensionError

Rational = Fraction


def as_rational(value) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings to a Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not matrix entries")
    if isinstance(value, (int, str)):
        return Fraction(value)
    if isinstance(value, (tuple, list)) and len(value) == 2:
        return Fraction(int(value[0]), int(value[1]))
    raise TypeError(f"cannot interpret {value!r} as an exact rational")


@dataclass(frozen=True)
class RationalMatrix:
    """Dense row-major matrix of exact rationals (immutable)."""

    rows: int
    cols: int
    entries: tuple[Fraction, ...]

    def __post_init__(self):
        if self.rows < 1 or self.cols < 1:
            raise DimensionError("matrix dimensions must be positive")
        if len(self.entries) != self.rows * self.cols:
            raise DimensionError(
                f"expected {self.rows * self.cols} entries, got {len(self.entries)}"
            )

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence]) -> "RationalMatrix":
        rows = [list(r) for r in rows]
        if not rows or not rows[0]:
            raise DimensionError("empty matrix")
        ncols = len(rows[0])
        if any(len(r) != ncols for r in rows):
            raise DimensionError("ragged rows")
        return cls(len(rows), ncols, tuple(as_rational(x) for r in rows for x in r))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "RationalMatrix":
        return cls(rows, cols, (Fraction(0),) * (rows * cols))

    @classmethod
    def identity(cls, n: int) -> "RationalMatrix":
        return cls(n, n, tuple(Fraction(int(i == j)) for i in range(n) for j in range(n)))

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def __getitem__(self, ij: tuple[int, int]) -> Fraction:
        i, j = ij
        if not (1 <= i <= self.rows and 1 <= j <= self.cols):
            raise IndexError(f"index ({i}, {j}) out of range for {self.rows}x{self.cols}")
        return self.entries[(i - 1) * self.cols + (j - 1)]

    def to_rows(self) -> list[list[Fraction]]:
        c = self.cols
        return [list(self.entries[k * c:(k + 1) * c]) for k in range(self.rows)]

    def transpose(self) -> "RationalMatrix":
        rows = self.to_rows()
        return RationalMatrix.from_rows([list(col) for col in zip(*rows)])

    @property
    def T(self) -> "RationalMatrix":
        return self.transpose()

    def submatrix(self, I: Iterable[int], J: Iterable[int]) -> "RationalMatrix":
        I, J = sorted(I), sorted(J)
        return RationalMatrix.from_rows([[self[i, j] for j in J] for i in I])

    def replace(self, updates: dict[tuple[int, int], Fraction]) -> "RationalMatrix":
        entries = list(self.entries)
        for (i, j), v in updates.items():
            entries[(i - 1) * self.cols + (j - 1)] = as_rational(v)
        return RationalMatrix(self.rows, self.cols, tuple(entries))

    def __matmul__(self, other: "RationalMatrix") -> "RationalMatrix":
        if self.cols != other.rows:
            raise DimensionError(f"cannot multiply {self.shape} by {other.shape}")
        a, b = self.to_rows(), other.to_rows()
        return RationalMatrix.from_rows(
            [[sum((a[i][k] * b[k][j] for k in range(self.cols)), Fraction(0))
              for j in range(other.cols)] for i in range(self.rows)]
        )

    def __str__(self) -> str:
        return "\n".join(" ".join(str(x) for x in row) for row in self.to_rows())


def _integer_rows(M: RationalMatrix) -> tuple[list[list[int]], int]:
    """Scale each row to integers; return the rows and the total scale factor."""
    out, scale = [], 1
    for row in M.to_rows():
        d = lcm(*(x.denominator for x in row))
        out.append([int(x * d) for x in row])
        scale *= d
    return out, scale


def _bareiss(a: list[list[int]]) -> tuple[int, int]:
    """In-place fraction-free elimination on integer rows.

    Returns ``(rank, sign)``, where ``sign`` tracks row swaps. For a square
    full-rank input the last pivot ``a[n-1][n-1]`` equals ``sign * det``.
    """
    nrows = len(a)
    ncols = len(a[0]) if a else 0
    prev, rank, sign = 1, 0, 1
    for col in range(ncols):
        if rank == nrows:
            break
        pivot = next((r for r in range(rank, nrows) if a[r][col] != 0), None)
        if pivot is None:
            continue
        if pivot != rank:
            a[rank], a[pivot] = a[pivot], a[rank]
            sign = -sign
        p = a[rank][col]
        for r in range(rank + 1, nrows):
            arc = a[r][col]
            row_r, row_k = a[r], a[rank]
            for c in range(col + 1, ncols):
                # exact: Sylvester's identity guarantees divisibility
                row_r[c] = (p * row_r[c] - arc * row_k[c]) // prev
            row_r[col] = 0
        prev = p
        rank += 1
    return rank, sign


def determinant(M: RationalMatrix) -> Fraction:
    """Exact determinant by Bareiss elimination."""
    if M.rows != M.cols:
        raise DimensionError(f"determinant of non-square {M.rows}x{M.cols} matrix")
    a, scale = _integer_rows(M)
    n = M.rows
    rank, sign = _bareiss(a)
    if rank < n:
        return Fraction(0)
    return Fraction(sign * a[n - 1][n - 1], scale)


def rank(M: RationalMatrix) -> int:
    """Exact rank by Bareiss elimination."""
    a, _ = _integer_rows(M)
    return _bareiss(a)[0]


def integer_rank(rows: list[list[int]]) -> int:
    """Rank of an integer matrix given as a list of rows (rows are copied)."""
    if not rows:
        return 0
    return _bareiss([list(r) for r in rows])[0]


def minor(M: RationalMatrix, I: Iterable[int], J: Iterable[int]) -> Fraction:
    """Determinant of the submatrix on rows ``I`` and columns ``J`` (1-based)."""
    I, J = sorted(set(I)), sorted(set(J))
    if len(I) != len(J):
        raise DimensionError(f"minor needs #I == #J, got {len(I)} and {len(J)}")
    for i in I:
        if not 1 <= i <= M.rows:
            raise IndexError(f"row index {i} out of range 1..{M.rows}")
    for j in J:
        if not 1 <= j <= M.cols:
            raise IndexError(f"column index {j} out of range 1..{M.cols}")
    if not I:
        return Fraction(1)
    return determinant(M.submatrix(I, J))

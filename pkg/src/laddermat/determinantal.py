"""Ladder determinantal ideals over the variable grid ``Z_L = {z_ij : (i, j) in L}``.

Variables are indexed by ladder cells in row-major order, and the diagonal
order is lex with that same order (``z11 > z12 > ... > z1n > z21 > ...``).
Under it the leading monomial of every minor is its main-diagonal product.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Sequence

from .errors import ResourceError
from .ladder import Cell, Ladder, max_square, variety_dim
from .polyring import (
    Budget,
    IdealBasis,
    buchberger,
    ideal_dimension,
    LexOrder,
    Polynomial,
    format_poly,
    is_groebner,
    monomial_ideal_dimension,
    normal_form,
    parse_poly,
)

MAX_SYMBOLIC_SIZE = 5


@dataclass(frozen=True)
class MinorSpec:
    rows: tuple[int, ...]
    cols: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "rows", tuple(sorted(self.rows)))
        object.__setattr__(self, "cols", tuple(sorted(self.cols)))
        if len(self.rows) != len(self.cols):
            raise ValueError("a minor needs as many rows as columns")

    @property
    def size(self) -> int:
        return len(self.rows)

    def cells(self) -> list[Cell]:
        return [(i, j) for i in self.rows for j in self.cols]

    def diagonal(self) -> list[Cell]:
        return list(zip(self.rows, self.cols))


@dataclass(frozen=True)
class VariableGrid:
    """Bijection between ladder cells and polynomial variables (row-major)."""

    ladder: Ladder
    cells: tuple[Cell, ...] = field(init=False)
    cell_to_var: dict = field(init=False, compare=False, hash=False)

    def __post_init__(self):
        cells = tuple(self.ladder.sorted_cells())
        object.__setattr__(self, "cells", cells)
        object.__setattr__(self, "cell_to_var", {c: k for k, c in enumerate(cells)})

    @property
    def nvars(self) -> int:
        return len(self.cells)

    @property
    def names(self) -> list[str]:
        wide = self.ladder.m >= 10 or self.ladder.n >= 10
        return [f"z{i}_{j}" if wide else f"z{i}{j}" for i, j in self.cells]

    def var(self, cell: Cell) -> Polynomial:
        return Polynomial.variable(self.nvars, self.cell_to_var[tuple(cell)])

    def point(self, X) -> list:
        """Coordinates of the ladder matrix ``X`` in variable order."""
        return [X[i, j] for i, j in self.cells]

    def format(self, p: Polynomial) -> str:
        return format_poly(p, self.names, diagonal_order(self))

    def parse(self, text: str) -> Polynomial:
        return parse_poly(text, self.names)


def diagonal_order(g: VariableGrid) -> LexOrder:
    return LexOrder.natural(g.nvars)


def symbolic_det(entry: Callable[[int, int], Polynomial], rows: Sequence[int], cols: Sequence[int],
                 nvars: int) -> Polynomial:
    """Determinant of ``[entry(i, j)]`` by Laplace expansion along the first row, memoized."""
    rows, cols = tuple(rows), tuple(cols)
    if len(rows) > MAX_SYMBOLIC_SIZE:
        raise ResourceError(f"symbolic determinants are limited to {MAX_SYMBOLIC_SIZE}x{MAX_SYMBOLIC_SIZE}")

    @lru_cache(maxsize=None)
    def det(rs: tuple[int, ...], cs: tuple[int, ...]) -> Polynomial:
        if not rs:
            return Polynomial.constant(nvars, 1)
        i, rest = rs[0], rs[1:]
        total = Polynomial(nvars)
        for k, j in enumerate(cs):
            term = entry(i, j) * det(rest, cs[:k] + cs[k + 1:])
            total = total - term if k % 2 else total + term
        return total

    return det(rows, cols)


def minor_polynomial(g: VariableGrid, spec: MinorSpec) -> Polynomial:
    return symbolic_det(lambda i, j: g.var((i, j)), spec.rows, spec.cols, g.nvars)


def ladder_minors(g: VariableGrid, t: int) -> list[tuple[MinorSpec, Polynomial]]:
    """All ``t x t`` minors of ``Z`` whose rectangle lies in the ladder."""
    rl = max_square(g.ladder)
    if not 1 <= t <= rl:
        raise ValueError(f"minor size {t} must lie in 1..r(L)={rl}")
    return [(MinorSpec(I, J), minor_polynomial(g, MinorSpec(I, J)))
            for I, J in g.ladder.rectangles(t)]


def _check_rank_bound(g: VariableGrid, r: int) -> None:
    rl = max_square(g.ladder)
    if not 1 <= r < rl:
        raise ValueError(f"need 1 <= r < r(L) = {rl}, got r={r}")


def det_ideal(g: VariableGrid, r: int) -> IdealBasis:
    """Generators of the ideal of ``(r+1)``-minors supported in the ladder."""
    _check_rank_bound(g, r)
    return IdealBasis(tuple(p for _, p in ladder_minors(g, r + 1)))


def verify_gb_minors(g: VariableGrid, r: int, budget: Budget | None = None) -> bool:
    """Buchberger-criterion check that the ladder minors form a Groebner basis."""
    return is_groebner(det_ideal(g, r).generators, diagonal_order(g), budget)


def permuted_grid_entry(g: VariableGrid, pi) -> Callable[[int, int], Polynomial]:
    """Entry function of ``pi(Z)``: the variable moved into each cell."""
    inv = pi.inverse()
    return lambda i, j: g.var(inv((i, j)))


def permuted_minor(g: VariableGrid, pi, spec: MinorSpec) -> Polynomial:
    return symbolic_det(permuted_grid_entry(g, pi), spec.rows, spec.cols, g.nvars)


def permuted_minor_in_ideal(g: VariableGrid, pi, spec: MinorSpec, r: int,
                            budget: Budget | None = None) -> bool:
    """Whether the ``spec`` minor of ``pi(Z)`` lies in the ladder determinantal ideal.

    The minors themselves are used as the Groebner basis; the test suite
    certifies that they are one with :func:`verify_gb_minors`.
    """
    _check_rank_bound(g, r)
    if spec.size != r + 1:
        raise ValueError(f"minor must be {r + 1}x{r + 1}, got {spec.size}x{spec.size}")
    missing = [c for c in spec.cells() if c not in g.ladder]
    if missing:
        raise ValueError(f"rectangle leaves the ladder at {missing[0]}")
    gens = det_ideal(g, r).generators
    p = permuted_minor(g, pi, spec)
    return not normal_form(p, gens, diagonal_order(g), budget)


def diagonal_monomial(g: VariableGrid, spec: MinorSpec) -> tuple[int, ...]:
    exps = [0] * g.nvars
    for c in spec.diagonal():
        exps[g.cell_to_var[c]] += 1
    return tuple(exps)


def dim_via_initial(g: VariableGrid, r: int) -> int:
    """Dimension of ``Q[Z_L] / in(I_L)`` computed from the diagonal monomials.

    A Groebner basis degeneration preserves dimension, so this equals the
    dimension of the ladder determinantal variety whenever the minors are a
    Groebner basis.
    """
    _check_rank_bound(g, r)
    gens = [diagonal_monomial(g, MinorSpec(I, J)) for I, J in g.ladder.rectangles(r + 1)]
    return monomial_ideal_dimension(gens, g.nvars)


def dim_via_groebner(g: VariableGrid, r: int, budget: Budget | None = None) -> int:
    """Dimension from a Buchberger completion of the minors.

    Agrees with :func:`dim_via_initial` whenever the minors already form a
    Groebner basis, and stays correct on ladders where they do not.
    """
    G = buchberger(det_ideal(g, r).generators, diagonal_order(g), budget)
    return ideal_dimension(G, diagonal_order(g))


def dimension_report(L: Ladder, r: int) -> dict:
    g = VariableGrid(L)
    formula = variety_dim(L, r)
    initial = dim_via_initial(g, r)
    return {"ladder": L.to_dict(), "r": r, "dim_formula": formula,
            "dim_initial": initial, "dim_groebner": dim_via_groebner(g, r),
            "match": formula == initial}


def gb_report(L: Ladder, r: int, budget: Budget | None = None) -> dict:
    g = VariableGrid(L)
    gens = det_ideal(g, r)
    return {"ladder": L.to_dict(), "r": r, "num_minors": len(gens),
            "is_groebner": is_groebner(gens.generators, diagonal_order(g), budget)}

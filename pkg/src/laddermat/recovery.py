"""Permutations of matrix entries and exhaustive uniqueness checks.

Convention: a :class:`CellPermutation` ``pi`` moves the entry at cell ``c``
to cell ``pi(c)``, i.e. ``apply(pi, X)[pi(c)] == X[c]``.

Randomness comes from :class:`numpy.random.SeedSequence`, which can be split
into independent child streams. Every sampler takes an explicit seed (an int
or a ``SeedSequence``) so that runs replay exactly.
"""

from __future__ import annotations

from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, permutations
from math import factorial, lcm
from typing import Iterable, Sequence

import numpy as np

from .determinantal import VariableGrid, det_ideal, diagonal_order
from .errors import GenerationError, PreconditionError, ResourceError
from .ladder import Cell, Ladder, check_support, ladder_rank, max_square, subcritical_cells, variety_dim
from .linalg import RationalMatrix, rank
from .polyring import (
    Budget,
    GrevlexOrder,
    Polynomial,
    buchberger,
    count_standard_monomials,
    default_budget,
    ideal_dimension,
    is_zero_dimensional,
)

DEFAULT_MAX_CELLS = 9
HARD_MAX_CELLS = 10
DEFAULT_COEFF_BOUND = 10**4
DEFAULT_ENTRY_BOUND = 100
SYSTEM_TERM_BUDGET = 10**8
TAGS = ("row_col_perm", "subcritical_move", "transpose", "composite", "none")


@dataclass(frozen=True)
class CellPermutation:
    """A bijection on the cells of a ladder."""

    ladder: Ladder
    mapping: tuple[tuple[Cell, Cell], ...]

    def __post_init__(self):
        pairs = tuple(sorted((tuple(a), tuple(b)) for a, b in dict(self.mapping).items()))
        object.__setattr__(self, "mapping", pairs)
        src = {a for a, _ in pairs}
        dst = {b for _, b in pairs}
        if src != set(self.ladder.cells) or dst != set(self.ladder.cells):
            raise ValueError("a cell permutation must be a bijection on the ladder cells")

    @classmethod
    def identity(cls, L: Ladder) -> "CellPermutation":
        return cls(L, tuple((c, c) for c in L.sorted_cells()))

    @classmethod
    def from_dict(cls, L: Ladder, images: dict) -> "CellPermutation":
        full = {c: c for c in L.cells}
        full.update({tuple(a): tuple(b) for a, b in images.items()})
        return cls(L, tuple(full.items()))

    @classmethod
    def swap(cls, L: Ladder, a: Cell, b: Cell) -> "CellPermutation":
        return cls.from_dict(L, {a: b, b: a})

    @property
    def as_dict(self) -> dict[Cell, Cell]:
        return dict(self.mapping)

    def __call__(self, cell: Cell) -> Cell:
        return self.as_dict[tuple(cell)]

    def inverse(self) -> "CellPermutation":
        return CellPermutation(self.ladder, tuple((b, a) for a, b in self.mapping))

    def __mul__(self, other: "CellPermutation") -> "CellPermutation":
        """``(self * other)(c) == self(other(c))``."""
        d, e = self.as_dict, other.as_dict
        return CellPermutation(self.ladder, tuple((c, d[e[c]]) for c in e))

    def is_identity(self) -> bool:
        return all(a == b for a, b in self.mapping)

    def to_list(self) -> list:
        return [[list(a), list(b)] for a, b in self.mapping if a != b]


def random_permutation(L: Ladder, seed) -> CellPermutation:
    """Uniform shape-preserving permutation drawn from ``seed``."""
    cells = L.sorted_cells()
    rng = np.random.default_rng(_as_seedseq(seed))
    order = rng.permutation(len(cells))
    return CellPermutation(L, tuple((cells[k], cells[int(t)]) for k, t in enumerate(order)))


def apply(pi: CellPermutation, X: RationalMatrix) -> RationalMatrix:
    """Move each in-ladder entry ``X[c]`` to cell ``pi(c)``."""
    check_support(X, pi.ladder)
    return X.replace({b: X[a] for a, b in pi.mapping})


def transpose_permutation(L: Ladder) -> CellPermutation:
    if not L.is_symmetric():
        raise ValueError("transposition preserves the ladder only for a symmetric shape")
    return CellPermutation(L, tuple(((i, j), (j, i)) for i, j in L.cells))


# -- trivial classes ---------------------------------------------------------

def ladder_line_swaps(L: Ladder) -> list[CellPermutation]:
    """Transpositions of two ladder-rows (or ladder-columns) of equal length.

    Entries are matched in increasing column (row) order.
    """
    gens = []
    for a, b in combinations(range(1, L.m + 1), 2):
        ra, rb = L.row_supports[a - 1], L.row_supports[b - 1]
        if ra and len(ra) == len(rb):
            gens.append(CellPermutation.from_dict(
                L, {**{(a, x): (b, y) for x, y in zip(ra, rb)},
                    **{(b, y): (a, x) for x, y in zip(ra, rb)}}))
    for a, b in combinations(range(1, L.n + 1), 2):
        ca, cb = L.col_supports[a - 1], L.col_supports[b - 1]
        if ca and len(ca) == len(cb):
            gens.append(CellPermutation.from_dict(
                L, {**{(x, a): (y, b) for x, y in zip(ca, cb)},
                    **{(y, b): (x, a) for x, y in zip(ca, cb)}}))
    return gens


def subcritical_swaps(L: Ladder, r: int) -> list[CellPermutation]:
    cells = sorted(subcritical_cells(L, r).cells)
    return [CellPermutation.swap(L, a, b) for a, b in combinations(cells, 2)]


def _index_perm(pi: CellPermutation, order: Sequence[Cell]) -> tuple[int, ...]:
    """Position map: the value at position ``k`` moves to position ``out[k]``."""
    pos = {c: k for k, c in enumerate(order)}
    d = pi.as_dict
    return tuple(pos[d[c]] for c in order)


def _orbit(start: tuple, gens: list[tuple[int, ...]], limit: int) -> set[tuple]:
    seen = {start}
    frontier = [start]
    while frontier:
        nxt = []
        for v in frontier:
            for g in gens:
                w = [None] * len(v)
                for k, t in enumerate(g):
                    w[t] = v[k]
                w = tuple(w)
                if w not in seen:
                    seen.add(w)
                    nxt.append(w)
        if len(seen) > limit:
            raise ResourceError(f"trivial-class orbit exceeds {limit} matrices")
        frontier = nxt
    return seen


@dataclass
class TrivialClasses:
    """Images of ``X`` under the rank-preserving families, keyed by in-ladder values.

    ``row_col``: ladder-row/column permutations; ``subcritical``: moves inside
    ``L_{<r}``; ``transposed``: transposes of the ``row_col`` images (symmetric
    shapes only); ``group``: everything generated by all of the above.
    """

    ladder: Ladder
    r: int
    row_col: set
    subcritical: set
    transposed: set
    group: set

    def tag(self, values: tuple) -> str:
        if values in self.row_col:
            return "row_col_perm"
        if values in self.subcritical:
            return "subcritical_move"
        if values in self.transposed:
            return "transpose"
        if values in self.group:
            return "composite"
        return "none"


def _values(X: RationalMatrix, cells: Sequence[Cell]) -> tuple:
    return tuple(X[c] for c in cells)


def _require_distinct(X: RationalMatrix, L: Ladder) -> None:
    vals = _values(X, L.sorted_cells())
    if len(set(vals)) != len(vals):
        raise PreconditionError("in-ladder entries must be pairwise distinct to classify")


@lru_cache(maxsize=64)
def trivial_classes(X: RationalMatrix, L: Ladder, r: int, limit: int = 10**6) -> TrivialClasses:
    check_support(X, L)
    cells = L.sorted_cells()
    start = _values(X, cells)
    rc = [_index_perm(p, cells) for p in ladder_line_swaps(L)]
    sub = [_index_perm(p, cells) for p in subcritical_swaps(L, r)]
    tr = [_index_perm(transpose_permutation(L), cells)] if L.is_symmetric() else []
    row_col = _orbit(start, rc, limit)
    subcrit = _orbit(start, sub, limit)
    transposed = set()
    if tr:
        t = tr[0]
        for v in row_col:
            w = [None] * len(v)
            for k, dst in enumerate(t):
                w[dst] = v[k]
            transposed.add(tuple(w))
    group = _orbit(start, rc + sub + tr, limit)
    return TrivialClasses(L, r, row_col, subcrit, transposed, group)


def from_values(L: Ladder, values: Sequence) -> RationalMatrix:
    """Ladder matrix with ``values`` placed on the cells in row-major order."""
    return RationalMatrix.zeros(L.m, L.n).replace(dict(zip(L.sorted_cells(), values)))


def trivial_class_matrices(X: RationalMatrix, L: Ladder, r: int) -> list[RationalMatrix]:
    """Every matrix in the trivial class of ``X``, in a fixed order."""
    return [from_values(L, v) for v in sorted(trivial_classes(X, L, r).group)]


def classify(pi: CellPermutation, X: RationalMatrix, L: Ladder, r: int) -> str:
    """Tag of the trivial family containing ``pi(X)``, or ``"none"``.

    With pairwise distinct entries, ``pi(X)`` determines ``pi``, so comparing
    matrices is the same as comparing permutations.
    """
    _require_distinct(X, L)
    Y = apply(pi, X)
    return trivial_classes(X, L, r).tag(_values(Y, L.sorted_cells()))


# -- exhaustive enumeration ----------------------------------------------------

def _scaled_values(X: RationalMatrix, cells: Sequence[Cell]) -> list[int]:
    vals = [X[c] for c in cells]
    d = lcm(*(v.denominator for v in vals)) if vals else 1
    return [int(v * d) for v in vals]


def _sign(p: Sequence[int]) -> int:
    s, seen = 1, [False] * len(p)
    for k in range(len(p)):
        if seen[k]:
            continue
        j, length = k, 0
        while not seen[j]:
            seen[j] = True
            j = p[j]
            length += 1
        if length % 2 == 0:
            s = -s
    return s


def _constraints(L: Ladder, r: int, cells: Sequence[Cell]):
    """(r+1)-minors inside L as position matrices, grouped by last-filled position."""
    pos = {c: k for k, c in enumerate(cells)}
    t = r + 1
    by_last: dict[int, list] = {}
    if t > max_square(L):
        return by_last
    terms = [(p, _sign(p)) for p in permutations(range(t))]
    for I, J in L.rectangles(t):
        grid = [[pos[(i, j)] for j in J] for i in I]
        last = max(max(row) for row in grid)
        expanded = [(s, tuple(grid[a][p[a]] for a in range(t))) for p, s in terms]
        by_last.setdefault(last, []).append(expanded)
    return by_last


def _search(values, by_last, n, prefix):
    """Yield source-index tuples (target position k takes values[src[k]])."""
    assign = [0] * n
    used = [False] * n
    for k, s in enumerate(prefix):
        assign[k] = values[s]
        used[s] = True
    src = list(prefix) + [0] * (n - len(prefix))

    def ok(k):
        for expanded in by_last.get(k, ()):
            total = 0
            for s, idx in expanded:
                prod = s
                for q in idx:
                    prod *= assign[q]
                total += prod
            if total:
                return False
        return True

    for k in range(len(prefix)):
        if not ok(k):
            return

    def go(k):
        if k == n:
            yield tuple(src)
            return
        for s in range(n):
            if used[s]:
                continue
            assign[k] = values[s]
            if ok(k):
                used[s] = True
                src[k] = s
                yield from go(k + 1)
                used[s] = False

    yield from go(len(prefix))


def _search_branch(args):
    values, by_last, n, prefix = args
    return list(_search(values, by_last, n, prefix))


def _enumerate(X: RationalMatrix, L: Ladder, r: int, max_cells: int, workers: int) -> list[CellPermutation]:
    n = len(L)
    if n > min(max_cells, HARD_MAX_CELLS):
        raise ResourceError(f"{n} cells exceed the enumeration budget of {min(max_cells, HARD_MAX_CELLS)}"
                            f" ({factorial(n)} permutations)")
    cells = L.sorted_cells()
    values = _scaled_values(X, cells)
    by_last = _constraints(L, r, cells)
    if workers > 1:
        branches = [(values, by_last, n, (s,)) for s in range(n)]
        with ProcessPoolExecutor(max_workers=workers) as ex:
            found = [t for part in ex.map(_search_branch, branches) for t in part]
    else:
        found = list(_search(values, by_last, n, ()))
    # target position k receives source src[k]: pi maps cells[src[k]] -> cells[k]
    return [CellPermutation(L, tuple((cells[s], cells[k]) for k, s in enumerate(src)))
            for src in found]


def enumerate_rank_preserving(X: RationalMatrix, L: Ladder, r: int, max_cells: int = DEFAULT_MAX_CELLS,
                              workers: int = 1) -> list[CellPermutation]:
    """Every shape-preserving ``pi`` with ``ladder_rank(pi(X)) <= r``.

    Depth-first search over assignments of source cells to target cells in
    row-major order; a branch is cut as soon as a fully assigned
    ``(r+1)``-minor inside the ladder is non-zero. Results are ordered
    lexicographically by the source-index tuple regardless of ``workers``.
    """
    check_support(X, L)
    got = ladder_rank(X, L)
    if got != r:
        raise PreconditionError(f"ladder-rank of X is {got}, expected {r}")
    return _enumerate(X, L, r, max_cells, workers)


def recover(Y: RationalMatrix, L: Ladder, r: int, max_cells: int = DEFAULT_MAX_CELLS,
            workers: int = 1) -> list[RationalMatrix]:
    """All rearrangements of the in-ladder entries of ``Y`` with ladder-rank at most ``r``.

    ``Y`` itself may have any ladder-rank (typically a scrambled low-rank
    matrix). Duplicates from repeated values are collapsed; order follows
    the search.
    """
    check_support(Y, L)
    out, seen = [], set()
    for pi in _enumerate(Y, L, r, max_cells, workers):
        Z = apply(pi, Y)
        if Z not in seen:
            seen.add(Z)
            out.append(Z)
    return out


@dataclass
class RecoveryReport:
    instance: dict
    preserving_count: int
    classes: dict
    unique: bool
    failures: list = field(default_factory=list)
    orbit_size: int = 0

    def to_dict(self) -> dict:
        return {"instance": self.instance, "preserving_count": self.preserving_count,
                "classes": dict(self.classes), "unique": self.unique,
                "failures": self.failures, "orbit_size": self.orbit_size}


def verify_uniqueness(X: RationalMatrix, L: Ladder, r: int, max_cells: int = DEFAULT_MAX_CELLS,
                      workers: int = 1) -> RecoveryReport:
    """Enumerate rank-preserving permutations and classify each one."""
    _require_distinct(X, L)
    perms = enumerate_rank_preserving(X, L, r, max_cells=max_cells, workers=workers)
    classes = trivial_classes(X, L, r)
    cells = L.sorted_cells()
    hist: Counter = Counter()
    failures = []
    for pi in perms:
        tag = classes.tag(_values(apply(pi, X), cells))
        hist[tag] += 1
        if tag == "none":
            failures.append(pi.to_list())
    instance = {"m": L.m, "n": L.n, "r": r, "ladder": L.to_dict(),
                "X": [[str(x) for x in row] for row in X.to_rows()]}
    return RecoveryReport(instance, len(perms), dict(sorted(hist.items())), not failures,
                          failures, len(classes.group))


# -- power sums ------------------------------------------------------------------

def power_sum(X: RationalMatrix, L: Ladder, nu: int) -> Fraction:
    if nu < 1:
        raise ValueError("power index must be positive")
    return sum((X[c] ** nu for c in L.sorted_cells()), Fraction(0))


def same_multiset(X: RationalMatrix, Y: RationalMatrix, L: Ladder) -> bool:
    check_support(X, L)
    check_support(Y, L)
    cells = L.sorted_cells()
    return sorted(X[c] for c in cells) == sorted(Y[c] for c in cells)


def power_sum_polynomial(g: VariableGrid, nu: int) -> Polynomial:
    out = {}
    for k in range(g.nvars):
        e = [0] * g.nvars
        e[k] = nu
        out[tuple(e)] = 1
    return Polynomial(g.nvars, out)


def symbolic_power_polys(L: Ladder, X: RationalMatrix) -> list[Polynomial]:
    """``p_nu(Z) - p_nu(X)`` over the ladder variables for ``nu = 1..#L``."""
    check_support(X, L)
    g = VariableGrid(L)
    return [power_sum_polynomial(g, nu) - power_sum(X, L, nu) for nu in range(1, len(L) + 1)]


def system_dim(L: Ladder, r: int) -> int:
    """Dimension of the rank-constrained variety; all of ``#L`` when ``r >= r(L)``."""
    if r >= max_square(L):
        return len(L)
    return variety_dim(L, r)


def _as_seedseq(seed) -> np.random.SeedSequence:
    if isinstance(seed, np.random.SeedSequence):
        return seed
    return np.random.SeedSequence(int(seed))


def spawn_seeds(seed, k: int) -> list[np.random.SeedSequence]:
    """Independent child streams for ``k`` trials."""
    return _as_seedseq(seed).spawn(k)


@dataclass
class PowerSumSystem:
    base_point: RationalMatrix
    ladder: Ladder
    r: int
    combos: list[tuple[int, ...]]
    seed: int | None
    polys: list[Polynomial] = field(default_factory=list, repr=False)

    def combo_polynomials(self) -> list[Polynomial]:
        return [sum((c * p for c, p in zip(cs, self.polys)), Polynomial(self.polys[0].nvars))
                for cs in self.combos]


def build_system(X: RationalMatrix, L: Ladder, r: int, seed, bound: int = DEFAULT_COEFF_BOUND,
                 n_combos: int | None = None) -> PowerSumSystem:
    """``dim + 1`` random integer combinations of the shifted power sums.

    Coefficients are uniform integers in ``[-bound, bound]``; an all-zero
    vector is redrawn. ``n_combos`` overrides the count.
    """
    got = ladder_rank(X, L)
    if got != r:
        raise PreconditionError(f"ladder-rank of X is {got}, expected {r}")
    k = system_dim(L, r) + 1 if n_combos is None else n_combos
    rng = np.random.default_rng(_as_seedseq(seed))
    combos = []
    while len(combos) < k:
        c = tuple(int(v) for v in rng.integers(-bound, bound, size=len(L), endpoint=True))
        if any(c):
            combos.append(c)
    seed_val = seed if isinstance(seed, int) else None
    return PowerSumSystem(X, L, r, combos, seed_val, symbolic_power_polys(L, X))


def system_check_point(system: PowerSumSystem, Z0: RationalMatrix) -> bool:
    """``Z0`` has ladder-rank at most ``r`` and every combination vanishes at it."""
    L = system.ladder
    check_support(Z0, L)
    if ladder_rank(Z0, L) > system.r:
        return False
    pt = VariableGrid(L).point(Z0)
    return all(h.evaluate(pt) == 0 for h in system.combo_polynomials())


def system_generators(system: PowerSumSystem) -> list[Polynomial]:
    g = VariableGrid(system.ladder)
    gens = []
    if system.r < max_square(system.ladder):
        gens.extend(det_ideal(g, system.r).generators)
    gens.extend(h for h in system.combo_polynomials() if h)
    return gens


def system_groebner(system: PowerSumSystem, budget: Budget | None = None):
    """Reduced Groebner basis of minors plus combinations, in grevlex."""
    order = GrevlexOrder(len(system.ladder))
    return buchberger(system_generators(system), order, budget or Budget(default_budget(SYSTEM_TERM_BUDGET))), order


def system_zero_dimensional(system: PowerSumSystem, max_vars: int = 6, budget: Budget | None = None) -> bool:
    """Finitely many complex solutions: a pure power of each variable is a leading monomial."""
    if len(system.ladder) > max_vars:
        raise ResourceError(f"{len(system.ladder)} variables exceed the Groebner limit of {max_vars}")
    G, order = system_groebner(system, budget)
    return is_zero_dimensional(G, order)


def system_summary(system: PowerSumSystem, max_vars: int = 6, budget: Budget | None = None) -> dict:
    """Dimension and, when finite, solution count (with multiplicity) of the system."""
    if len(system.ladder) > max_vars:
        raise ResourceError(f"{len(system.ladder)} variables exceed the Groebner limit of {max_vars}")
    G, order = system_groebner(system, budget)
    zero_dim = is_zero_dimensional(G, order)
    return {"combos": len(system.combos), "zero_dimensional": zero_dim,
            "dimension": ideal_dimension(G, order),
            "solutions": count_standard_monomials(G, order) if zero_dim else None}


# -- random instances ------------------------------------------------------------

def in_row_col_orbit(Y: RationalMatrix, X: RationalMatrix) -> bool:
    """Whether ``Y = P X Q`` for permutation matrices ``P``, ``Q``."""
    if Y.shape != X.shape:
        return False
    xs = X.entries
    if len(set(xs)) == len(xs):
        # distinct entries: Y is a row/column permutation iff rows and columns
        # of the two matrices partition the values identically
        def parts(M):
            return ({frozenset(r) for r in M.to_rows()},
                    {frozenset(c) for c in M.transpose().to_rows()})
        return parts(X) == parts(Y)
    rows, yrows = X.to_rows(), Y.to_rows()
    for P in permutations(range(X.rows)):
        pr = [rows[p] for p in P]
        for Q in permutations(range(X.cols)):
            if all(pr[i][Q[j]] == yrows[i][j] for i in range(X.rows) for j in range(X.cols)):
                return True
    return False


def _factor_product(rng, m, n, r, bound) -> RationalMatrix:
    A = rng.integers(-bound, bound, size=(m, r), endpoint=True)
    B = rng.integers(-bound, bound, size=(r, n), endpoint=True)
    return RationalMatrix.from_rows(
        [[sum(int(A[i, k]) * int(B[k, j]) for k in range(r)) for j in range(n)] for i in range(m)]
    )


def _distinct_magnitudes(values: Sequence[Fraction]) -> bool:
    # equal magnitudes (x and -x) put the sample on a sign-symmetric special locus
    return len({abs(v) for v in values}) == len(values)


def is_generic_low_rank(X: RationalMatrix, r: int) -> bool:
    """Screens used by :func:`random_low_rank`: exact rank, entries of distinct
    magnitude, and for square matrices ``X.T`` outside the row/column orbit."""
    if rank(X) != r or not _distinct_magnitudes(X.entries):
        return False
    if X.rows == X.cols and in_row_col_orbit(X.transpose(), X):
        return False
    return True


def random_low_rank(m: int, n: int, r: int, seed, bound: int = DEFAULT_ENTRY_BOUND, attempts: int = 1000) -> RationalMatrix:
    """``A @ B`` with integer factors in ``[-bound, bound]``, screened for genericity."""
    if not 1 <= r <= min(m, n):
        raise ValueError(f"rank {r} impossible for a {m}x{n} matrix")
    rng = np.random.default_rng(_as_seedseq(seed))
    for _ in range(attempts):
        X = _factor_product(rng, m, n, r, bound)
        if is_generic_low_rank(X, r):
            return X
    raise GenerationError(f"no generic rank-{r} {m}x{n} sample in {attempts} attempts")


def mask(X: RationalMatrix, L: Ladder) -> RationalMatrix:
    return RationalMatrix.from_rows(
        [[X[i, j] if (i, j) in L else 0 for j in range(1, X.cols + 1)] for i in range(1, X.rows + 1)]
    )


def random_ladder_low_rank(L: Ladder, r: int, seed, bound: int = DEFAULT_ENTRY_BOUND, attempts: int = 1000) -> RationalMatrix:
    """Masked product ``A @ B`` resampled until ladder-rank is ``r`` and entries are distinct."""
    rl = max_square(L)
    if not 1 <= r < rl:
        raise ValueError(f"need 1 <= r < r(L) = {rl}, got r={r}")
    if L.is_trivial:
        return random_low_rank(L.m, L.n, r, seed, bound, attempts)
    rng = np.random.default_rng(_as_seedseq(seed))
    cells = L.sorted_cells()
    for _ in range(attempts):
        X = mask(_factor_product(rng, L.m, L.n, r, bound), L)
        if _distinct_magnitudes(_values(X, cells)) and ladder_rank(X, L) == r:
            return X
    raise GenerationError(f"no generic ladder-rank-{r} sample in {attempts} attempts")

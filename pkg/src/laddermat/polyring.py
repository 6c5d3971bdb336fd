"""Sparse multivariate polynomials over Q, monomial orders and Buchberger.

Monomials are exponent tuples. A lexicographic order is described by a
:data:`VarOrder`, a permutation of variable indices listing the most
significant variable first. Orders expose ``key(monomial)`` so that the
larger monomial has the larger key under ordinary tuple comparison.

S-polynomial convention: ``S(f, g) = (L / lt(f)) * f - (L / lt(g)) * g`` where
``L`` is the lcm of the leading monomials and ``lt`` includes the leading
coefficient, so both leading terms become exactly ``L`` and cancel.
"""

from __future__ import annotations

import os
import re
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence

from .errors import DimensionError, ResourceError

Monomial = tuple[int, ...]
VarOrder = tuple[int, ...]

DEFAULT_TERM_BUDGET = 10**6


def default_budget(fallback: int = DEFAULT_TERM_BUDGET) -> int:
    """Term-operation cap; ``LADDERMAT_BUDGET`` overrides ``fallback``."""
    env = os.environ.get("LADDERMAT_BUDGET")
    return int(env) if env else fallback


class Budget:
    """Counts term operations and raises once the cap is exceeded."""

    def __init__(self, limit: int | None = None):
        self.limit = default_budget() if limit is None else limit
        self.used = 0

    def spend(self, k: int) -> None:
        self.used += k
        if self.used > self.limit:
            raise ResourceError(f"term-operation budget of {self.limit} exhausted")


# -- monomials -------------------------------------------------------------

def divides(a: Monomial, b: Monomial) -> bool:
    return all(x <= y for x, y in zip(a, b))


def mono_lcm(a: Monomial, b: Monomial) -> Monomial:
    return tuple(max(x, y) for x, y in zip(a, b))


def mono_div(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x - y for x, y in zip(a, b))


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x + y for x, y in zip(a, b))


class LexOrder:
    """Lexicographic order with ``var_order[0]`` the largest variable."""

    def __init__(self, var_order: Sequence[int]):
        var_order = tuple(var_order)
        if sorted(var_order) != list(range(len(var_order))):
            raise ValueError(f"{var_order} is not a permutation of the variables")
        self.var_order = var_order
        self._identity = var_order == tuple(range(len(var_order)))

    @classmethod
    def natural(cls, nvars: int) -> "LexOrder":
        return cls(range(nvars))

    def key(self, a: Monomial):
        if self._identity:
            return a
        return tuple(a[v] for v in self.var_order)

    def __len__(self):
        return len(self.var_order)

    def __repr__(self):
        return f"LexOrder({self.var_order})"


class GrevlexOrder:
    """Graded reverse lexicographic order; variable 0 is the largest."""

    def __init__(self, nvars: int):
        self.nvars = nvars

    def key(self, a: Monomial):
        return (sum(a), tuple(-x for x in reversed(a)))

    def __len__(self):
        return self.nvars

    def __repr__(self):
        return f"GrevlexOrder({self.nvars})"


def lex_compare(a: Monomial, b: Monomial, order: LexOrder | Sequence[int]) -> int:
    """Return 1, 0 or -1 as ``a`` is greater than, equal to or less than ``b``."""
    if not isinstance(order, (LexOrder, GrevlexOrder)):
        order = LexOrder(order)
    if len(a) != len(b) or len(a) != len(order):
        raise DimensionError("monomials and order must share a variable count")
    ka, kb = order.key(a), order.key(b)
    return (ka > kb) - (ka < kb)


# -- polynomials -------------------------------------------------------------

class Polynomial:
    """Immutable sparse polynomial: a map from exponent tuples to non-zero Fractions."""

    __slots__ = ("nvars", "terms", "_hash")

    def __init__(self, nvars: int, terms: dict | None = None):
        self.nvars = nvars
        clean = {}
        for mono, c in (terms or {}).items():
            mono = tuple(mono)
            if len(mono) != nvars:
                raise DimensionError(f"monomial {mono} has wrong length for {nvars} variables")
            c = Fraction(c)
            if c:
                clean[mono] = clean.get(mono, 0) + c
        self.terms = {k: v for k, v in clean.items() if v}
        self._hash = None

    @classmethod
    def _raw(cls, nvars, terms):
        p = cls.__new__(cls)
        p.nvars, p.terms, p._hash = nvars, terms, None
        return p

    @classmethod
    def constant(cls, nvars: int, c) -> "Polynomial":
        return cls(nvars, {(0,) * nvars: c})

    @classmethod
    def variable(cls, nvars: int, k: int) -> "Polynomial":
        e = [0] * nvars
        e[k] = 1
        return cls._raw(nvars, {tuple(e): Fraction(1)})

    @classmethod
    def monomial(cls, mono: Monomial, c=1) -> "Polynomial":
        return cls(len(mono), {tuple(mono): c})

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Polynomial.constant(self.nvars, other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.nvars, frozenset(self.terms.items())))
        return self._hash

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            if other.nvars != self.nvars:
                raise DimensionError("polynomials live in rings of different size")
            return other
        return Polynomial.constant(self.nvars, other)

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            v = out.get(m, 0) + c
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        return Polynomial._raw(self.nvars, out)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial._raw(self.nvars, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            c = Fraction(other)
            if not c:
                return Polynomial._raw(self.nvars, {})
            return Polynomial._raw(self.nvars, {m: c * v for m, v in self.terms.items()})
        other = self._coerce(other)
        out: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = mono_mul(m1, m2)
                v = out.get(m, 0) + c1 * c2
                if v:
                    out[m] = v
                else:
                    out.pop(m, None)
        return Polynomial._raw(self.nvars, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative powers are not polynomials")
        result = Polynomial.constant(self.nvars, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def mul_term(self, mono: Monomial, c) -> "Polynomial":
        return Polynomial._raw(
            self.nvars, {mono_mul(m, mono): c * v for m, v in self.terms.items()}
        )

    def total_degree(self) -> int:
        return max((sum(m) for m in self.terms), default=-1)

    def evaluate(self, point: Sequence) -> Fraction:
        point = [Fraction(x) for x in point]
        total = Fraction(0)
        for m, c in self.terms.items():
            t = c
            for x, e in zip(point, m):
                if e:
                    t *= x ** e
            total += t
        return total

    def support(self) -> list[Monomial]:
        return list(self.terms)

    def leading(self, order) -> tuple[Monomial, Fraction]:
        if not self.terms:
            raise ValueError("the zero polynomial has no initial monomial")
        m = max(self.terms, key=order.key)
        return m, self.terms[m]

    def monic(self, order) -> "Polynomial":
        _, c = self.leading(order)
        return self * (1 / c)

    def __repr__(self):
        return f"Polynomial({format_poly(self)})"


def initial_monomial(p: Polynomial, order) -> tuple[Monomial, Fraction]:
    """The largest support monomial of ``p`` under ``order`` with its coefficient."""
    return p.leading(order)


# -- text format -----------------------------------------------------------

def default_names(nvars: int) -> list[str]:
    return [f"x{k + 1}" for k in range(nvars)]


def format_poly(p: Polynomial, names: Sequence[str] | None = None, order=None) -> str:
    """Render as ``3*z11*z22 - 1/2*z12*z21``, terms in decreasing order."""
    names = list(names) if names is not None else default_names(p.nvars)
    order = order or LexOrder.natural(p.nvars)
    if not p.terms:
        return "0"
    parts = []
    for mono in sorted(p.terms, key=order.key, reverse=True):
        c = p.terms[mono]
        factors = []
        for name, e in zip(names, mono):
            if e == 1:
                factors.append(name)
            elif e > 1:
                factors.append(f"{name}^{e}")
        mag = abs(c)
        if not factors:
            body = str(mag)
        elif mag == 1:
            body = "*".join(factors)
        else:
            body = "*".join([str(mag)] + factors)
        sign = "-" if c < 0 else "+"
        parts.append((sign, body))
    first_sign, first = parts[0]
    out = ("-" if first_sign == "-" else "") + first
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


_TERM_SPLIT = re.compile(r"\s*([+-])\s*")


def parse_poly(text: str, names: Sequence[str]) -> Polynomial:
    """Inverse of :func:`format_poly` for the given variable names."""
    index = {name: k for k, name in enumerate(names)}
    nvars = len(names)
    text = text.strip()
    if not text:
        raise ValueError("empty polynomial text")
    if text[0] not in "+-":
        text = "+" + text
    pieces = _TERM_SPLIT.split(text)[1:]
    result = Polynomial(nvars)
    for sign, body in zip(pieces[::2], pieces[1::2]):
        coeff = Fraction(1 if sign == "+" else -1)
        exps = [0] * nvars
        for factor in body.split("*"):
            factor = factor.strip()
            if not factor:
                raise ValueError(f"malformed term {body!r}")
            base, _, power = factor.partition("^")
            e = int(power) if power else 1
            if base in index:
                exps[index[base]] += e
            else:
                try:
                    coeff *= Fraction(base) ** e
                except ValueError:
                    raise ValueError(f"unknown variable {base!r}") from None
        result = result + Polynomial(nvars, {tuple(exps): coeff})
    return result


# -- division and Groebner bases ------------------------------------------------

def normal_form(p: Polynomial, G: Sequence[Polynomial], order, budget: Budget | None = None) -> Polynomial:
    """Fully reduced remainder of ``p`` modulo ``G``; first divisor in list order wins."""
    budget = budget or Budget()
    leads = []
    for g in G:
        if not g:
            raise ValueError("generators must be non-zero")
        m, c = g.leading(order)
        leads.append((m, c, g))
    key = order.key
    work = dict(p.terms)
    rem: dict = {}
    while work:
        lm = max(work, key=key)
        lc = work[lm]
        for gm, gc, g in leads:
            if divides(gm, lm):
                q = mono_div(lm, gm)
                f = lc / gc
                budget.spend(len(g.terms))
                for m, c in g.terms.items():
                    mm = mono_mul(m, q)
                    v = work.get(mm, 0) - f * c
                    if v:
                        work[mm] = v
                    else:
                        work.pop(mm, None)
                break
        else:
            rem[lm] = lc
            del work[lm]
    return Polynomial._raw(p.nvars, rem)


def s_polynomial(f: Polynomial, g: Polynomial, order) -> Polynomial:
    if not f or not g:
        raise ValueError("S-polynomial of the zero polynomial")
    fm, fc = f.leading(order)
    gm, gc = g.leading(order)
    L = mono_lcm(fm, gm)
    return f.mul_term(mono_div(L, fm), 1 / fc) - g.mul_term(mono_div(L, gm), 1 / gc)


def _coprime(a: Monomial, b: Monomial) -> bool:
    return all(not (x and y) for x, y in zip(a, b))


def is_groebner(G: Sequence[Polynomial], order, budget: Budget | None = None) -> bool:
    """Buchberger's criterion: every S-polynomial reduces to zero modulo ``G``."""
    G = list(G)
    budget = budget or Budget()
    leads = [g.leading(order)[0] for g in G]
    for a, b in combinations(range(len(G)), 2):
        if _coprime(leads[a], leads[b]):
            continue
        if normal_form(s_polynomial(G[a], G[b], order), G, order, budget):
            return False
    return True


def buchberger(G: Iterable[Polynomial], order, budget: Budget | None = None) -> list[Polynomial]:
    """Reduced Groebner basis (monic, sorted by decreasing leading monomial).

    Pairs are processed in normal selection order (smallest lcm degree, ties
    broken by the monomial order); pairs with coprime leading monomials are
    skipped.
    """
    budget = budget or Budget()
    basis = [g.monic(order) for g in G if g]
    if not basis:
        return []
    key = order.key
    leads = [g.leading(order)[0] for g in basis]
    pairs = {(a, b) for a, b in combinations(range(len(basis)), 2)}

    def pair_key(ab):
        L = mono_lcm(leads[ab[0]], leads[ab[1]])
        return (sum(L), key(L), ab)

    while pairs:
        ab = min(pairs, key=pair_key)
        pairs.discard(ab)
        a, b = ab
        if _coprime(leads[a], leads[b]):
            continue
        h = normal_form(s_polynomial(basis[a], basis[b], order), basis, order, budget)
        if h:
            h = h.monic(order)
            basis.append(h)
            leads.append(h.leading(order)[0])
            k = len(basis) - 1
            pairs.update((i, k) for i in range(k))
    return reduce_basis(basis, order, budget)


def reduce_basis(G: Sequence[Polynomial], order, budget: Budget | None = None) -> list[Polynomial]:
    """Minimalize and inter-reduce a Groebner basis; leading coefficients become 1."""
    budget = budget or Budget()
    G = [g.monic(order) for g in G if g]
    G.sort(key=lambda g: order.key(g.leading(order)[0]))
    minimal: list[Polynomial] = []
    for g in G:
        lm = g.leading(order)[0]
        if not any(divides(h.leading(order)[0], lm) for h in minimal):
            minimal.append(g)
    reduced = []
    for i, g in enumerate(minimal):
        others = minimal[:i] + minimal[i + 1:]
        lm, _ = g.leading(order)
        tail = Polynomial._raw(g.nvars, {m: c for m, c in g.terms.items() if m != lm})
        r = normal_form(tail, others, order, budget) if others else tail
        reduced.append(r + Polynomial.monomial(lm))
    reduced.sort(key=lambda g: order.key(g.leading(order)[0]), reverse=True)
    return reduced


def minimal_initial_generators(G: Sequence[Polynomial], order) -> set[Monomial]:
    """Minimal generators of the monomial ideal spanned by the leading monomials."""
    leads = sorted({g.leading(order)[0] for g in G if g}, key=sum)
    out: list[Monomial] = []
    for m in leads:
        if not any(divides(x, m) for x in out):
            out.append(m)
    return set(out)


# -- monomial ideals ---------------------------------------------------------

def monomial_ideal_contains(t: Monomial, gens: Iterable[Monomial]) -> bool:
    """Membership in a monomial ideal: some generator divides ``t``."""
    return any(divides(g, t) for g in gens)


def _min_hitting_set(supports: list[frozenset[int]], bound: int) -> int:
    """Smallest set of variables meeting every support (exact branch and bound)."""
    best = [bound]

    def go(chosen: frozenset[int], size: int):
        if size >= best[0]:
            return
        open_ = next((s for s in supports if not (s & chosen)), None)
        if open_ is None:
            best[0] = size
            return
        for v in sorted(open_):
            go(chosen | {v}, size + 1)

    go(frozenset(), 0)
    return best[0]


def monomial_ideal_dimension(gens: Iterable[Monomial], nvars: int) -> int:
    """Krull dimension of ``Q[x] / (gens)`` for squarefree monomial generators.

    Equals the largest number of variables whose product is divisible by no
    generator, i.e. ``nvars`` minus a minimum hitting set of the supports.
    """
    supports = []
    for g in gens:
        if len(g) != nvars:
            raise DimensionError(f"monomial {g} does not have {nvars} exponents")
        if any(e > 1 for e in g):
            raise ValueError(f"monomial {g} is not squarefree")
        s = frozenset(k for k, e in enumerate(g) if e)
        if not s:
            return -1  # unit ideal: empty variety
        supports.append(s)
    if not supports:
        return nvars
    return nvars - _min_hitting_set(supports, nvars + 1)


def ideal_dimension(G: Sequence[Polynomial], order) -> int:
    """Dimension of ``Q[x] / I`` from a Groebner basis ``G`` of ``I``.

    Uses the radical of the initial ideal, which has the same dimension.
    """
    nvars = G[0].nvars
    gens = {tuple(int(e > 0) for e in g.leading(order)[0]) for g in G if g}
    return monomial_ideal_dimension(gens, nvars)


def is_zero_dimensional(G: Sequence[Polynomial], order) -> bool:
    """Every variable has a pure power among the leading monomials of the GB ``G``."""
    if not G:
        return False
    nvars = G[0].nvars
    leads = [g.leading(order)[0] for g in G]
    if any(sum(m) == 0 for m in leads):
        return True
    hit = set()
    for m in leads:
        nz = [k for k, e in enumerate(m) if e]
        if len(nz) == 1:
            hit.add(nz[0])
    return len(hit) == nvars


def count_standard_monomials(G: Sequence[Polynomial], order, limit: int = 100000) -> int:
    """Number of monomials outside the initial ideal (finite only if zero-dimensional).

    For a zero-dimensional ideal this is the number of solutions counted with
    multiplicity over the algebraic closure.
    """
    if not is_zero_dimensional(G, order):
        raise ValueError("ideal is not zero-dimensional")
    nvars = G[0].nvars
    leads = [g.leading(order)[0] for g in G]
    if any(sum(m) == 0 for m in leads):
        return 0
    seen = {(0,) * nvars}
    frontier = [(0,) * nvars]
    while frontier:
        nxt = []
        for m in frontier:
            for k in range(nvars):
                e = list(m)
                e[k] += 1
                e = tuple(e)
                if e in seen or monomial_ideal_contains(e, leads):
                    continue
                seen.add(e)
                nxt.append(e)
        if len(seen) > limit:
            raise ResourceError("too many standard monomials")
        frontier = nxt
    return len(seen)


@dataclass(frozen=True)
class IdealBasis:
    """Generators of an ideal, kept in the order given."""

    generators: tuple[Polynomial, ...]

    def __post_init__(self):
        object.__setattr__(self, "generators", tuple(self.generators))
        if any(not g for g in self.generators):
            raise ValueError("ideal generators must be non-zero")

    def __iter__(self):
        return iter(self.generators)

    def __len__(self):
        return len(self.generators)

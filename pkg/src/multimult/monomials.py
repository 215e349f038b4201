"""Exact arithmetic on monomials and monomial ideals.

The ambient ring is the polynomial ring k[x_1, ..., x_m] over the rationals,
localized at the irrelevant maximal ideal (x_1, ..., x_m).  Every object here
is combinatorial: a monomial is an exponent vector, an ideal is a minimal set
of exponent vectors, and lengths of finite quotients are counts of monomials.
All values are immutable; all operations are pure functions of their inputs.

Monomials are ordered globally by graded lexicographic order (total degree
first, then lexicographic on the exponent vector), so every generator list
and every enumeration below is deterministic.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

#: Sentinel returned by length computations on quotients of infinite length.
INFINITE = float("inf")

#: Dimension of the zero module / degree of the zero polynomial.
MINUS_INFINITY = float("-inf")


class ContextMismatchError(ValueError):
    """Operands live in polynomial rings with different variable counts."""


def _grlex_key(exponents):
    return (sum(exponents), exponents)


@dataclass(frozen=True)
class RingContext:
    """The ambient localized polynomial ring, identified by its variable count."""

    num_vars: int

    def __post_init__(self):
        if self.num_vars < 1:
            raise ValueError("need at least one variable")

    def variable(self, i: int) -> Monomial:
        """The monomial x_{i+1} (0-based index)."""
        if not 0 <= i < self.num_vars:
            raise ValueError(f"variable index {i} out of range")
        exps = [0] * self.num_vars
        exps[i] = 1
        return Monomial(tuple(exps))

    def one(self) -> Monomial:
        return Monomial((0,) * self.num_vars)

    def monomial(self, *exponents: int) -> Monomial:
        if len(exponents) != self.num_vars:
            raise ContextMismatchError(
                f"expected {self.num_vars} exponents, got {len(exponents)}"
            )
        return Monomial(tuple(int(e) for e in exponents))


@dataclass(frozen=True)
class Monomial:
    """A monomial, stored as its exponent vector."""

    exponents: tuple[int, ...]

    def __post_init__(self):
        if any(e < 0 for e in self.exponents):
            raise ValueError(f"negative exponent in {self.exponents}")

    @property
    def degree(self) -> int:
        return sum(self.exponents)

    def is_one(self) -> bool:
        return self.degree == 0

    def divides(self, other: Monomial) -> bool:
        return all(a <= b for a, b in zip(self.exponents, other.exponents))

    def __mul__(self, other: Monomial) -> Monomial:
        return Monomial(tuple(a + b for a, b in zip(self.exponents, other.exponents)))

    def lcm(self, other: Monomial) -> Monomial:
        return Monomial(tuple(max(a, b) for a, b in zip(self.exponents, other.exponents)))

    def colon(self, other: Monomial) -> Monomial:
        """The exponent-wise truncated quotient self : other."""
        return Monomial(tuple(max(a - b, 0) for a, b in zip(self.exponents, other.exponents)))

    def support(self) -> frozenset[int]:
        return frozenset(i for i, e in enumerate(self.exponents) if e > 0)

    def __str__(self) -> str:
        if self.is_one():
            return "1"
        parts = []
        for i, e in enumerate(self.exponents):
            if e == 1:
                parts.append(f"x{i + 1}")
            elif e > 1:
                parts.append(f"x{i + 1}^{e}")
        return "*".join(parts)


def _minimal_rows(rows: list[tuple[int, ...]]) -> tuple[tuple[int, ...], ...]:
    """Drop every exponent vector divisible by another one in the list.

    Rows of equal total degree cannot properly divide each other, so only
    strictly-lower-degree kept rows need to be consulted for each degree block.
    """
    unique = sorted(set(rows), key=_grlex_key)
    if not unique:
        return ()
    arr = np.asarray(unique, dtype=np.int64)
    degs = arr.sum(axis=1)
    kept_blocks: list[np.ndarray] = []
    kept: np.ndarray | None = None
    start = 0
    while start < len(arr):
        end = start
        while end < len(arr) and degs[end] == degs[start]:
            end += 1
        block = arr[start:end]
        if kept is not None and len(kept):
            dominated = (kept[None, :, :] <= block[:, None, :]).all(axis=2).any(axis=1)
            block = block[~dominated]
        if len(block):
            kept_blocks.append(block)
            kept = np.concatenate(kept_blocks)
        start = end
    assert kept is not None
    return tuple(tuple(int(x) for x in row) for row in kept)


@dataclass(frozen=True)
class MonomialIdeal:
    """A finitely generated monomial ideal, stored by its minimal generators.

    The zero ideal has no generators; the unit ideal has the single generator 1.
    Construct through :func:`ideal` so the generator set is always minimalized.
    """

    ctx: RingContext
    gens: tuple[tuple[int, ...], ...]

    # -- constructors ------------------------------------------------------

    @staticmethod
    def zero(ctx: RingContext) -> MonomialIdeal:
        return MonomialIdeal(ctx, ())

    @staticmethod
    def unit(ctx: RingContext) -> MonomialIdeal:
        return MonomialIdeal(ctx, ((0,) * ctx.num_vars,))

    # -- predicates --------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.gens

    def is_unit(self) -> bool:
        return bool(self.gens) and sum(self.gens[0]) == 0

    def is_proper(self) -> bool:
        return not self.is_unit()

    def monomials(self) -> tuple[Monomial, ...]:
        return tuple(Monomial(g) for g in self.gens)

    def max_generator_degree(self) -> int:
        return max((sum(g) for g in self.gens), default=0)

    def contains(self, mono: Monomial) -> bool:
        if len(mono.exponents) != self.ctx.num_vars:
            raise ContextMismatchError("monomial has wrong variable count")
        if not self.gens:
            return False
        arr = _gens_array(self)
        target = np.asarray(mono.exponents, dtype=np.int64)
        return bool((arr <= target).all(axis=1).any())

    def contains_ideal(self, other: MonomialIdeal) -> bool:
        _check_ctx(self, other)
        return all(self.contains(Monomial(g)) for g in other.gens)

    def __le__(self, other: MonomialIdeal) -> bool:
        return other.contains_ideal(self)

    def pure_power_bounds(self) -> tuple[int, ...] | None:
        """For each variable, the least e with x_i^e in the ideal, or None
        if some variable has no pure power here (ideal not primary to the
        maximal ideal)."""
        m = self.ctx.num_vars
        bounds = [None] * m
        for g in self.gens:
            supp = [i for i, e in enumerate(g) if e > 0]
            if len(supp) == 0:
                return (0,) * m
            if len(supp) == 1:
                i = supp[0]
                if bounds[i] is None or g[i] < bounds[i]:
                    bounds[i] = g[i]
        if any(b is None for b in bounds):
            return None
        return tuple(bounds)

    def is_primary_to_max_ideal(self) -> bool:
        """Whether the ideal contains a power of every variable."""
        return self.pure_power_bounds() is not None

    def minimal_primes(self) -> tuple[frozenset[int], ...]:
        """Minimal primes, each a minimal variable cover of the generator supports.

        A prime over a monomial ideal is generated by variables; the minimal
        ones are the minimal sets of variables meeting every generator support.
        """
        if self.is_zero():
            return (frozenset(),)
        if self.is_unit():
            return ()
        supports = [frozenset(i for i, e in enumerate(g) if e > 0) for g in self.gens]
        m = self.ctx.num_vars
        covers: list[frozenset[int]] = []
        for size in range(0, m + 1):
            for combo in itertools.combinations(range(m), size):
                cand = frozenset(combo)
                if any(prev <= cand for prev in covers):
                    continue
                if all(cand & s for s in supports):
                    covers.append(cand)
        return tuple(sorted(covers, key=lambda c: (len(c), sorted(c))))

    def __str__(self) -> str:
        if self.is_zero():
            return "(0)"
        return "(" + ", ".join(str(Monomial(g)) for g in self.gens) + ")"


def ideal(ctx: RingContext, monomials) -> MonomialIdeal:
    """Build a monomial ideal from any iterable of Monomials or exponent tuples."""
    rows = []
    for mono in monomials:
        exps = mono.exponents if isinstance(mono, Monomial) else tuple(int(e) for e in mono)
        if len(exps) != ctx.num_vars:
            raise ContextMismatchError(
                f"generator has {len(exps)} exponents, ring has {ctx.num_vars} variables"
            )
        if any(e < 0 for e in exps):
            raise ValueError(f"negative exponent in {exps}")
        rows.append(exps)
    return MonomialIdeal(ctx, _minimal_rows(rows))


def _check_ctx(a: MonomialIdeal, b: MonomialIdeal) -> None:
    if a.ctx != b.ctx:
        raise ContextMismatchError("ideals live in different rings")


@lru_cache(maxsize=None)
def _gens_array(a: MonomialIdeal) -> np.ndarray:
    """Generator matrix sorted by total degree (rows already grlex-sorted)."""
    return np.asarray(a.gens, dtype=np.int64).reshape(len(a.gens), a.ctx.num_vars)


@lru_cache(maxsize=None)
def _gens_degrees(a: MonomialIdeal) -> np.ndarray:
    return _gens_array(a).sum(axis=1)


def _members_mask(a: MonomialIdeal, points: np.ndarray) -> np.ndarray:
    """Boolean mask: which rows of `points` lie in the ideal `a`.

    Prunes by total degree: a generator can only divide points of at least
    its own degree.
    """
    n = len(points)
    if a.is_zero() or n == 0:
        return np.zeros(n, dtype=bool)
    gens = _gens_array(a)
    gdeg = _gens_degrees(a)
    pdeg = points.sum(axis=1)
    mask = np.zeros(n, dtype=bool)
    order = np.argsort(pdeg, kind="stable")
    chunk = 1024
    for s in range(0, n, chunk):
        idx = order[s : s + chunk]
        pts = points[idx]
        hi = int(np.searchsorted(gdeg, pts.sum(axis=1).max(), side="right"))
        if hi == 0:
            continue
        sub = gens[:hi]
        mask[idx] = (sub[None, :, :] <= pts[:, None, :]).all(axis=2).any(axis=1)
    return mask


# -- ideal arithmetic ------------------------------------------------------


@lru_cache(maxsize=None)
def ideal_sum(a: MonomialIdeal, b: MonomialIdeal) -> MonomialIdeal:
    _check_ctx(a, b)
    return MonomialIdeal(a.ctx, _minimal_rows(list(a.gens) + list(b.gens)))


@lru_cache(maxsize=None)
def _ideal_product_cached(a: MonomialIdeal, b: MonomialIdeal) -> MonomialIdeal:
    if a.is_zero() or b.is_zero():
        return MonomialIdeal.zero(a.ctx)
    ga = _gens_array(a)
    gb = _gens_array(b)
    prods = (ga[:, None, :] + gb[None, :, :]).reshape(-1, a.ctx.num_vars)
    rows = [tuple(int(x) for x in row) for row in prods]
    return MonomialIdeal(a.ctx, _minimal_rows(rows))


def ideal_product(a: MonomialIdeal, b: MonomialIdeal) -> MonomialIdeal:
    """The product ideal a*b, minimalized."""
    _check_ctx(a, b)
    if len(b.gens) > len(a.gens):
        a, b = b, a
    return _ideal_product_cached(a, b)


@lru_cache(maxsize=None)
def ideal_power(a: MonomialIdeal, n: int) -> MonomialIdeal:
    """The power a^n; a^0 is the unit ideal."""
    if n < 0:
        raise ValueError("negative power")
    if n == 0:
        return MonomialIdeal.unit(a.ctx)
    if n == 1:
        return a
    return ideal_product(ideal_power(a, n - 1), a)


@lru_cache(maxsize=None)
def colon_by_monomial(q: MonomialIdeal, u: Monomial) -> MonomialIdeal:
    """The colon ideal q : u = { v : u*v in q }."""
    if len(u.exponents) != q.ctx.num_vars:
        raise ContextMismatchError("monomial has wrong variable count")
    if q.is_zero():
        return q
    ua = np.asarray(u.exponents, dtype=np.int64)
    shifted = np.maximum(_gens_array(q) - ua, 0)
    rows = [tuple(int(x) for x in row) for row in shifted]
    return MonomialIdeal(q.ctx, _minimal_rows(rows))


@lru_cache(maxsize=None)
def ideal_intersection(a: MonomialIdeal, b: MonomialIdeal) -> MonomialIdeal:
    """Intersection, generated by pairwise lcms of generators."""
    _check_ctx(a, b)
    if a.is_zero() or b.is_zero():
        return MonomialIdeal.zero(a.ctx)
    ga = _gens_array(a)
    gb = _gens_array(b)
    lcms = np.maximum(ga[:, None, :], gb[None, :, :]).reshape(-1, a.ctx.num_vars)
    rows = [tuple(int(x) for x in row) for row in lcms]
    return MonomialIdeal(a.ctx, _minimal_rows(rows))


def colon_by_ideal(q: MonomialIdeal, i: MonomialIdeal) -> MonomialIdeal:
    """q : i, the intersection of the colons by each generator of i."""
    _check_ctx(q, i)
    if i.is_zero():
        return MonomialIdeal.unit(q.ctx)
    out = None
    for g in i.gens:
        c = colon_by_monomial(q, Monomial(g))
        out = c if out is None else ideal_intersection(out, c)
    return out


@lru_cache(maxsize=None)
def saturation(q: MonomialIdeal, i: MonomialIdeal) -> MonomialIdeal:
    """The stable value q : i^infinity of the ascending colon chain."""
    _check_ctx(q, i)
    current = q
    while True:
        nxt = colon_by_ideal(current, i)
        if nxt == current:
            return current
        current = nxt


# -- length counting -------------------------------------------------------


def _colon_pure_bounds(bot: MonomialIdeal, g: tuple[int, ...]) -> list[int | None]:
    """Per-variable least pure-power exponent of (bot : x^g), without
    materializing the colon.  None marks a variable with no pure power."""
    m = bot.ctx.num_vars
    if bot.is_zero():
        return [None] * m
    gens = _gens_array(bot)
    garr = np.asarray(g, dtype=np.int64)
    bounds: list[int | None] = []
    for j in range(m):
        others = np.ones(m, dtype=bool)
        others[j] = False
        ok = (gens[:, others] <= garr[others]).all(axis=1)
        if not ok.any():
            bounds.append(None)
            continue
        vals = np.maximum(gens[ok, j] - garr[j], 0)
        bounds.append(int(vals.min()))
    return bounds


def standard_monomials(w: MonomialIdeal) -> list[tuple[int, ...]]:
    """All monomials outside `w`, for `w` containing a power of every variable.

    Enumerated in the global graded lexicographic order.
    """
    bounds = w.pure_power_bounds()
    if bounds is None:
        raise ValueError("ideal is not primary to the maximal ideal")
    box = list(itertools.product(*(range(b) for b in bounds)))
    if not box:
        return []
    pts = np.asarray(box, dtype=np.int64)
    inside = _members_mask(w, pts)
    out = [tuple(int(x) for x in row) for row in pts[~inside]]
    return sorted(out, key=_grlex_key)


def _count_difference(top: MonomialIdeal, bot: MonomialIdeal,
                      colon_floor: MonomialIdeal | None = None):
    """Count monomials lying in `top` but not in `bot`.

    Every such monomial factors as g*v with g a minimal generator of `top`
    and v a standard monomial of bot : g, so the count is the size of the
    deduplicated candidate set { g*v : g*v not in bot }.  Finiteness holds
    exactly when every colon bot : g contains a power of each variable.

    `colon_floor`, when given, must be an ideal primary to the maximal ideal
    with colon_floor * top contained in bot; its standard monomials then bound
    every bot : g and the per-generator colon analysis is skipped.
    """
    if top.is_zero():
        return 0
    if bot.is_unit():
        return 0
    m = top.ctx.num_vars
    candidates: list[tuple[int, ...]] = []
    if colon_floor is not None:
        std = standard_monomials(colon_floor)
        garr = _gens_array(top)
        sarr = np.asarray(std, dtype=np.int64).reshape(len(std), m)
        cands = (garr[:, None, :] + sarr[None, :, :]).reshape(-1, m)
        candidates = [tuple(int(x) for x in row) for row in cands]
    else:
        for g in top.gens:
            bounds = _colon_pure_bounds(bot, g)
            if all(b == 0 for b in bounds):
                continue  # g already lies in bot
            if any(b is None for b in bounds):
                return INFINITE
            for v in itertools.product(*(range(b) for b in bounds)):
                candidates.append(tuple(a + b for a, b in zip(g, v)))
    if not candidates:
        return 0
    pts = np.asarray(sorted(set(candidates)), dtype=np.int64)
    inside = _members_mask(bot, pts)
    return int((~inside).sum())


def graded_quotient_length(top: MonomialIdeal, bottom: MonomialIdeal,
                           q: MonomialIdeal):
    """The number of monomials in top+q and not in bottom+q, or INFINITE.

    Realizes the length of ((top+q)/(bottom+q)) as a count of monomials;
    finiteness is decided exactly via the colons (bottom+q) : g.
    """
    _check_ctx(top, bottom)
    _check_ctx(top, q)
    return _count_difference(ideal_sum(top, q), ideal_sum(bottom, q))


# -- quotient modules ------------------------------------------------------


@dataclass(frozen=True)
class QuotientModule:
    """The subquotient module (T + B)/B for monomial ideals T (top) and B
    (relations).

    The cyclic module A/B is the case T = (1), and is what the constructor
    builds when `top` is omitted.  The general pair form is closed under the
    three constructions the multiplicity recursion needs: quotients M/yM,
    annihilator submodules 0:y, and torsion saturations.  The zero module is
    any pair with T contained in B; its dimension is minus infinity by
    convention.
    """

    ctx: RingContext
    relations: MonomialIdeal
    top: MonomialIdeal = None

    def __post_init__(self):
        if self.top is None:
            object.__setattr__(self, "top", MonomialIdeal.unit(self.ctx))
        if self.ctx != self.relations.ctx or self.ctx != self.top.ctx:
            raise ContextMismatchError("module parts live in a different ring")

    @staticmethod
    def free(ctx: RingContext) -> QuotientModule:
        return QuotientModule(ctx, MonomialIdeal.zero(ctx))

    def is_zero(self) -> bool:
        return self.relations.contains_ideal(self.top)

    def annihilator(self) -> MonomialIdeal:
        """Ann((T+B)/B) = B : T."""
        return colon_by_ideal(self.relations, self.top)

    def quotient_by(self, extra: MonomialIdeal) -> QuotientModule:
        """The quotient M / extra*M, presented as T / (extra*T + B)."""
        cut = ideal_sum(ideal_product(extra, self.top), self.relations)
        return QuotientModule(self.ctx, cut, self.top)

    def quotient_by_elements(self, elems) -> QuotientModule:
        return self.quotient_by(ideal(self.ctx, elems))

    def annihilator_of(self, u: Monomial) -> QuotientModule:
        """The submodule (0 : u) of M, the pair (T meet (B:u)) / B."""
        sub = ideal_intersection(self.top, colon_by_monomial(self.relations, u))
        return QuotientModule(self.ctx, self.relations, sub)

    def saturate(self, i: MonomialIdeal) -> QuotientModule:
        """The quotient killing i-power torsion: M / (0 : i^infinity)."""
        torsion = ideal_intersection(self.top, saturation(self.relations, i))
        return QuotientModule(self.ctx, ideal_sum(self.relations, torsion), self.top)

    def length(self):
        """The total monomial count of (T+B) outside B, or INFINITE."""
        return _count_difference(ideal_sum(self.top, self.relations), self.relations)


def krull_dim(module: QuotientModule):
    """dim of the subquotient: the variable count minus the smallest variable
    cover of the annihilator supports; minus infinity for the zero module."""
    ann = module.annihilator()
    if ann.is_unit():
        return MINUS_INFINITY
    if ann.is_zero():
        return module.ctx.num_vars
    smallest = min(len(p) for p in ann.minimal_primes())
    return module.ctx.num_vars - smallest

"""Multigraded Hilbert functions, exact interpolation, and mixed multiplicities.

Two Hilbert functions are attached to a family (J; I_1, ..., I_d) acting on a
cyclic module M = A/Q:

* ``hf_P`` counts the length of J^n0 * I^n * M / J^(n0+1) * I^n * M,
* ``hf_F`` counts the length of I^n * M / J^n0 * I^n * M,

where I^n abbreviates the product I_1^{n_1} ... I_d^{n_d}.  For all large
(n0, n) each function agrees with a polynomial; we recover that polynomial by
exact linear solving over the rationals on the binomial-coefficient basis

    binom(n0 + k0, k0) * binom(n1 + k1, k1) * ... * binom(nd + kd, kd),

certifying the fit on a disjoint verification band of grid values.  The mixed
multiplicity of type (k0, k) is the basis coefficient at (k0, k); it is
*defined* exactly when every coefficient at a componentwise-larger index
vanishes.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from math import comb

import numpy as np

from .monomials import (
    MINUS_INFINITY,
    ContextMismatchError,
    MonomialIdeal,
    QuotientModule,
    _count_difference,
    ideal_power,
    ideal_product,
    ideal_sum,
    krull_dim,
)

#: Extent (per axis) of the disjoint verification band used to certify a fit.
BAND_EXTENT = 2

#: The base offset doubles on stabilization failure, up to this factor.
WINDOW_CAP_FACTOR = 64


class StabilizationError(RuntimeError):
    """The evaluation window never produced a certified polynomial fit."""

    def __init__(self, message, residuals=None):
        super().__init__(message)
        self.residuals = residuals or []


class FinitenessError(RuntimeError):
    """A Hilbert value came out infinite; the family is invalid."""


@dataclass(frozen=True)
class MultiDegree:
    """A point (n0, n1, ..., nd) in the multigrading."""

    n0: int
    n: tuple[int, ...]

    def as_tuple(self) -> tuple[int, ...]:
        return (self.n0,) + self.n


@dataclass(frozen=True)
class MixedType:
    """An index (k0, k); as a joint-reduction shape it calls for k_i elements
    from each I_i and k0 + 1 elements from J."""

    k0: int
    k: tuple[int, ...]

    def __post_init__(self):
        if self.k0 < 0 or any(ki < 0 for ki in self.k):
            raise ValueError("type entries must be non-negative")

    def as_tuple(self) -> tuple[int, ...]:
        return (self.k0,) + self.k

    @property
    def size(self) -> int:
        """Total element count of a candidate of this type: k0 + 1 + |k|."""
        return self.k0 + 1 + sum(self.k)


@dataclass(frozen=True)
class IdealFamily:
    """An m-primary ideal J, the ideals I_1..I_d, and the module they act on."""

    j: MonomialIdeal
    ideals: tuple[MonomialIdeal, ...]
    module: QuotientModule

    def __post_init__(self):
        if not self.ideals:
            raise ValueError("need at least one ideal I_i")
        for part in (self.j, *self.ideals):
            if part.ctx != self.module.ctx:
                raise ContextMismatchError("family parts live in different rings")
        if not self.j.is_primary_to_max_ideal():
            raise ValueError("J must contain a power of every variable")

    @property
    def d(self) -> int:
        return len(self.ideals)

    @property
    def ctx(self):
        return self.module.ctx

    def product_ideal(self) -> MonomialIdeal:
        """The product I = I_1 * ... * I_d."""
        out = self.ideals[0]
        for i in self.ideals[1:]:
            out = ideal_product(out, i)
        return out

    def saturated_module(self) -> QuotientModule:
        """M with its I-power torsion killed."""
        return self.module.saturate(self.product_ideal())

    def saturated_dim(self):
        return krull_dim(self.saturated_module())

    def max_generator_degree(self) -> int:
        degs = [self.j.max_generator_degree(), self.module.relations.max_generator_degree()]
        degs += [i.max_generator_degree() for i in self.ideals]
        degs.append(self.module.top.max_generator_degree())
        return max(degs)

    def with_module(self, module: QuotientModule) -> IdealFamily:
        return IdealFamily(self.j, self.ideals, module)


def weighted_power(fam: IdealFamily, deg: MultiDegree) -> MonomialIdeal:
    """The ideal J^n0 * I_1^{n_1} * ... * I_d^{n_d}."""
    out = ideal_power(fam.j, deg.n0)
    for i, ni in zip(fam.ideals, deg.n):
        out = ideal_product(out, ideal_power(i, ni))
    return out


def _checked_count(top, bottom, q, floor):
    value = _count_difference(ideal_sum(top, q), ideal_sum(bottom, q), colon_floor=floor)
    if value == float("inf"):
        raise FinitenessError("infinite Hilbert value: J is not an ideal of definition")
    return int(value)


def hf_P(fam: IdealFamily, deg: MultiDegree) -> int:
    """Length of J^n0 I^n M / J^(n0+1) I^n M."""
    if len(deg.n) != fam.d:
        raise ValueError("multidegree has wrong axis count")
    q = fam.module.relations
    top = ideal_product(weighted_power(fam, deg), fam.module.top)
    bottom = ideal_product(top, fam.j)
    return _checked_count(top, bottom, q, fam.j)


def hf_F(fam: IdealFamily, deg: MultiDegree) -> int:
    """Length of I^n M / J^n0 I^n M."""
    if len(deg.n) != fam.d:
        raise ValueError("multidegree has wrong axis count")
    if deg.n0 == 0:
        return 0
    q = fam.module.relations
    top = ideal_product(weighted_power(fam, MultiDegree(0, deg.n)), fam.module.top)
    jpow = ideal_power(fam.j, deg.n0)
    bottom = ideal_product(top, jpow)
    return _checked_count(top, bottom, q, jpow)


# -- polynomials on the binomial basis ------------------------------------


class BinomialBasisPolynomial:
    """A polynomial stored by coefficients on products of binomial factors.

    ``coeffs`` maps an index tuple (k0, ..., kd) to a rational coefficient;
    the basis element at that index evaluates to the product of binom(vi+ki, ki)
    over all axes.  The zero polynomial has degree minus infinity.
    """

    def __init__(self, num_axes: int, coeffs: dict[tuple[int, ...], Fraction]):
        self.num_axes = num_axes
        self.coeffs = {k: Fraction(v) for k, v in coeffs.items() if v != 0}

    @staticmethod
    def zero(num_axes: int) -> BinomialBasisPolynomial:
        return BinomialBasisPolynomial(num_axes, {})

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def total_degree(self):
        if not self.coeffs:
            return MINUS_INFINITY
        return max(sum(k) for k in self.coeffs)

    def coefficient(self, index: tuple[int, ...]) -> Fraction:
        return self.coeffs.get(tuple(index), Fraction(0))

    def evaluate(self, point: tuple[int, ...]) -> Fraction:
        if len(point) != self.num_axes:
            raise ValueError("point has wrong axis count")
        total = Fraction(0)
        for index, c in self.coeffs.items():
            term = c
            for v, k in zip(point, index):
                term *= comb(v + k, k)
            total += term
        return total

    def difference_once(self, axis: int) -> BinomialBasisPolynomial:
        """One forward difference along `axis`.

        On the binomial basis, differencing an index value t along one axis
        spreads the coefficient onto every index value below t on that axis
        (the hockey-stick identity), and kills index value 0.
        """
        out: dict[tuple[int, ...], Fraction] = {}
        for index, c in self.coeffs.items():
            t = index[axis]
            for j in range(t):
                tgt = index[:axis] + (j,) + index[axis + 1 :]
                out[tgt] = out.get(tgt, Fraction(0)) + c
        return BinomialBasisPolynomial(self.num_axes, out)

    def difference(self, mt: MixedType) -> BinomialBasisPolynomial:
        steps = mt.as_tuple()
        if len(steps) != self.num_axes:
            raise ValueError("type has wrong axis count")
        out = self
        for axis, count in enumerate(steps):
            for _ in range(count):
                out = out.difference_once(axis)
        return out

    def __eq__(self, other):
        return (
            isinstance(other, BinomialBasisPolynomial)
            and self.num_axes == other.num_axes
            and self.coeffs == other.coeffs
        )

    def __repr__(self):
        return f"BinomialBasisPolynomial({self.num_axes}, {self.coeffs!r})"


@dataclass(frozen=True)
class HilbertTable:
    """A dense window of Hilbert values with its base offset."""

    base: tuple[int, ...]
    values: np.ndarray  # shape = per-axis extents

    @property
    def extents(self) -> tuple[int, ...]:
        return tuple(self.values.shape)

    def difference(self, mt: MixedType) -> HilbertTable:
        steps = mt.as_tuple()
        vals = self.values
        for axis, count in enumerate(steps):
            for _ in range(count):
                if vals.shape[axis] < 2:
                    raise ValueError("table too small to difference")
                upper = [slice(None)] * vals.ndim
                lower = [slice(None)] * vals.ndim
                upper[axis] = slice(1, None)
                lower[axis] = slice(0, -1)
                vals = vals[tuple(upper)] - vals[tuple(lower)]
        return HilbertTable(self.base, vals)

    def is_constant(self) -> bool:
        return bool(self.values.size) and bool((self.values == self.values.flat[0]).all())


def difference(obj, mt: MixedType):
    """Forward differencing of a polynomial or a Hilbert table."""
    return obj.difference(mt)


# -- exact interpolation ---------------------------------------------------


def _basis_indices(num_axes: int, max_total: int):
    ranges = [range(max_total + 1)] * num_axes
    out = [idx for idx in itertools.product(*ranges) if sum(idx) <= max_total]
    return sorted(out)


def _solve_exact(rows, rhs):
    """Solve an overdetermined integer system exactly over the rationals.

    Returns the solution vector or None when inconsistent.  The column space
    must have full rank (guaranteed by the box evaluation grids used here).
    """
    nrows = len(rows)
    ncols = len(rows[0]) if nrows else 0
    aug = [[Fraction(x) for x in row] + [Fraction(rhs[i])] for i, row in enumerate(rows)]
    pivots = []
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, nrows) if aug[i][c] != 0), None)
        if pivot is None:
            raise RuntimeError("evaluation grid is not unisolvent")
        aug[r], aug[pivot] = aug[pivot], aug[r]
        pr = aug[r]
        inv = 1 / pr[c]
        aug[r] = pr = [x * inv for x in pr]
        for i in range(nrows):
            if i != r and aug[i][c] != 0:
                f = aug[i][c]
                aug[i] = [a - f * b for a, b in zip(aug[i], pr)]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    for i in range(r, nrows):
        if aug[i][ncols] != 0:
            return None
    sol = [Fraction(0)] * ncols
    for i, c in enumerate(pivots):
        sol[c] = aug[i][ncols]
    return sol


@dataclass(frozen=True)
class FitResult:
    """A certified polynomial fit with the window that produced it."""

    poly: BinomialBasisPolynomial
    base: int
    extent: int
    band_base: int
    band_extent: int
    table: HilbertTable

    def provenance(self) -> dict:
        return {
            "window_base": self.base,
            "window_extent": self.extent,
            "band_base": self.band_base,
            "band_extent": self.band_extent,
        }


def _box(num_axes: int, base: int, extent: int):
    return itertools.product(*(range(base, base + extent) for _ in range(num_axes)))


def _evaluate_grid(fam: IdealFamily, which: str, points):
    hf = hf_P if which == "P" else hf_F
    return {pt: hf(fam, MultiDegree(pt[0], pt[1:])) for pt in points}


def initial_offset(fam: IdealFamily) -> int:
    """Starting base offset of the evaluation window.

    Uses the dimension of the module itself (not its saturation), which
    dominates and keeps strand computations inside the stable regime.
    """
    mdim = krull_dim(fam.module)
    base_dim = 0 if mdim == MINUS_INFINITY else int(mdim)
    return max(1, base_dim + fam.max_generator_degree())


@lru_cache(maxsize=None)
def interpolate(fam: IdealFamily, which: str = "P") -> FitResult:
    """Fit the Hilbert polynomial of ``hf_P`` or ``hf_F`` exactly.

    The fit is retried on doubled base offsets until the solved polynomial
    reproduces every value of the evaluation box and of a disjoint
    verification band; failure past the cap raises StabilizationError.
    """
    if which not in ("P", "F"):
        raise ValueError("which must be 'P' or 'F'")
    num_axes = fam.d + 1
    qdim = fam.saturated_dim()
    if qdim == MINUS_INFINITY:
        # Zero saturation: the function is eventually zero.
        return _fit_zero(fam, which, num_axes)
    degree = int(qdim) - 1 if which == "P" else int(qdim)
    if degree < 0:
        return _fit_zero(fam, which, num_axes)
    n_start = initial_offset(fam)
    base = n_start
    indices = _basis_indices(num_axes, degree)
    residual_log = []
    while base <= WINDOW_CAP_FACTOR * n_start:
        extent = degree + 2
        fit_points = list(_box(num_axes, base, extent))
        values = _evaluate_grid(fam, which, fit_points)
        rows = [
            [int(np.prod([comb(v + k, k) for v, k in zip(pt, idx)])) for idx in indices]
            for pt in fit_points
        ]
        rhs = [values[pt] for pt in fit_points]
        sol = _solve_exact(rows, rhs)
        if sol is not None:
            poly = BinomialBasisPolynomial(
                num_axes, {idx: c for idx, c in zip(indices, sol)}
            )
            band_base = base + extent
            band_points = list(_box(num_axes, band_base, BAND_EXTENT))
            band_values = _evaluate_grid(fam, which, band_points)
            residuals = [
                (pt, band_values[pt] - poly.evaluate(pt))
                for pt in band_points
                if poly.evaluate(pt) != band_values[pt]
            ]
            if not residuals:
                shape = (extent,) * num_axes
                arr = np.zeros(shape, dtype=np.int64)
                for pt in fit_points:
                    arr[tuple(v - base for v in pt)] = values[pt]
                table = HilbertTable((base,) * num_axes, arr)
                return FitResult(poly, base, extent, band_base, BAND_EXTENT, table)
            residual_log.append((base, residuals))
        else:
            residual_log.append((base, "inconsistent fit system"))
        base *= 2
    raise StabilizationError(
        f"no stable window up to base {WINDOW_CAP_FACTOR * n_start}", residual_log
    )


def _fit_zero(fam: IdealFamily, which: str, num_axes: int) -> FitResult:
    base = initial_offset(fam)
    extent = 2
    points = list(_box(num_axes, base, extent))
    values = _evaluate_grid(fam, which, points)
    poly = BinomialBasisPolynomial.zero(num_axes)
    residuals = [(pt, v) for pt, v in values.items() if v != 0]
    if residuals:
        raise StabilizationError("zero module produced nonzero Hilbert values", residuals)
    arr = np.zeros((extent,) * num_axes, dtype=np.int64)
    return FitResult(
        poly, base, extent, base + extent, BAND_EXTENT, HilbertTable((base,) * num_axes, arr)
    )


def table_on_window(fam: IdealFamily, which: str, base: int, extent: int) -> HilbertTable:
    """Evaluate a dense Hilbert window at an arbitrary base/extent."""
    num_axes = fam.d + 1
    points = list(_box(num_axes, base, extent))
    values = _evaluate_grid(fam, which, points)
    arr = np.zeros((extent,) * num_axes, dtype=np.int64)
    for pt in points:
        arr[tuple(v - base for v in pt)] = values[pt]
    return HilbertTable((base,) * num_axes, arr)


# -- mixed multiplicities --------------------------------------------------


def _index_strictly_above(h: tuple[int, ...], k: tuple[int, ...]) -> bool:
    return all(a >= b for a, b in zip(h, k)) and h != k


def mixed_multiplicity(fam: IdealFamily, mt: MixedType):
    """The binomial-basis coefficient at (k0, k) and its defined-flag.

    The flag is true exactly when every coefficient at a componentwise larger
    index vanishes (the maximal-degrees condition); the componentwise order is
    the adopted reading of "larger index".
    """
    if len(mt.k) != fam.d:
        raise ValueError("type has wrong axis count")
    fit = interpolate(fam, "P")
    target = mt.as_tuple()
    value = fit.poly.coefficient(target)
    defined = not any(
        _index_strictly_above(idx, target) for idx in fit.poly.coeffs
    )
    return value, defined


class Consistency(Enum):
    CONSISTENT = "CONSISTENT"
    INCONSISTENT = "INCONSISTENT"
    INCONCLUSIVE = "INCONCLUSIVE"


def defined_iff_joint_reduction(fam: IdealFamily, mt: MixedType, search_budget=None):
    """Cross-check the defined-flag against an explicit joint-reduction search.

    A certificate plus a true flag (or no certificate plus a false flag when
    the search is exhaustive) is CONSISTENT; a certificate alongside a false
    flag is INCONSISTENT; a fruitless budget-limited search with a true flag
    is INCONCLUSIVE, since the monomial candidate pool may simply be too small.
    """
    from .reductions import PoolPolicy, search_joint_reduction

    _, defined = mixed_multiplicity(fam, mt)
    policy = search_budget if search_budget is not None else PoolPolicy()
    cand = search_joint_reduction(fam, mt, policy)
    if cand is not None:
        return (Consistency.CONSISTENT, cand) if defined else (Consistency.INCONSISTENT, cand)
    return (Consistency.INCONCLUSIVE, None) if defined else (Consistency.CONSISTENT, None)

"""Joint-reduction certificates and element-property tests.

A joint-reduction candidate of type (k0, k) supplies k_i monomials drawn from
each ideal I_i and k0 + 1 monomials drawn from J.  The defining containment

    J^n0 I^n M  =  sum of u * J^(n0-1) I^n M   over J-sourced u
                 + sum of u * J^n0 I^(n-e_i) M over I_i-sourced u

holds automatically from right to left, so certification only checks the left
side generator-by-generator modulo the module relations, on a finite window of
large multidegrees.  A holds-verdict is therefore "certified on window": the
window base and extent travel with the certificate.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .hilbert import BAND_EXTENT, IdealFamily, MixedType, MultiDegree, initial_offset, weighted_power
from .monomials import (
    Monomial,
    MonomialIdeal,
    QuotientModule,
    _grlex_key,
    colon_by_monomial,
    graded_quotient_length,
    ideal,
    ideal_intersection,
    ideal_power,
    ideal_product,
    ideal_sum,
    krull_dim,
    saturation,
)

#: Source tag for elements drawn from J.
J_SOURCE = "J"


@dataclass(frozen=True)
class JointReductionCandidate:
    """An ordered tuple of (monomial, source) pairs with a declared type.

    Sources are the string "J" or a 0-based index into the family's ideals.
    Elements are stored I_1-block first, then I_2, ..., then the J-block; a
    candidate with no J-block at all is a pure candidate checked against the
    ungraded containment I^n M = sum of u * I^(n-e_i) M.
    """

    elements: tuple[tuple[Monomial, object], ...]
    declared_type: MixedType

    def __post_init__(self):
        d = len(self.declared_type.k)
        counts = [0] * d
        j_count = 0
        for _, src in self.elements:
            if src == J_SOURCE:
                j_count += 1
            elif isinstance(src, int) and 0 <= src < d:
                counts[src] += 1
            else:
                raise ValueError(f"unknown source tag {src!r}")
        if tuple(counts) != self.declared_type.k:
            raise ValueError("I-sourced element counts do not match the declared type")
        if j_count not in (0, self.declared_type.k0 + 1):
            raise ValueError("J-sourced element count must be k0+1 (or 0 for pure candidates)")

    @property
    def is_pure(self) -> bool:
        return all(src != J_SOURCE for _, src in self.elements)

    def by_source(self, src) -> tuple[Monomial, ...]:
        return tuple(u for u, s in self.elements if s == src)

    def monomials(self) -> tuple[Monomial, ...]:
        return tuple(u for u, _ in self.elements)

    def i_sourced(self) -> tuple[tuple[Monomial, int], ...]:
        return tuple((u, s) for u, s in self.elements if s != J_SOURCE)

    def check_membership(self, fam: IdealFamily) -> None:
        for u, src in self.elements:
            source_ideal = fam.j if src == J_SOURCE else fam.ideals[src]
            if not source_ideal.contains(u):
                raise ValueError(f"element {u} does not lie in its source ideal")


@dataclass(frozen=True)
class ContainmentCertificate:
    """Outcome of a window containment check; failures carry a witness."""

    holds: bool
    window_base: int
    window_extent: int
    witness: tuple[tuple[int, ...], Monomial] | None = None

    def __post_init__(self):
        if not self.holds and self.witness is None:
            raise ValueError("a failing certificate needs a witness")


def _principal(ctx, u: Monomial) -> MonomialIdeal:
    return ideal(ctx, [u])


def _module_piece(fam: IdealFamily, deg: MultiDegree) -> MonomialIdeal:
    """The ideal presenting J^n0 I^n M inside A, without the relations."""
    return ideal_product(weighted_power(fam, deg), fam.module.top)


def _rhs_joint(fam: IdealFamily, cand: JointReductionCandidate, deg: MultiDegree) -> MonomialIdeal:
    ctx = fam.ctx
    out = fam.module.relations
    for u, src in cand.elements:
        if src == J_SOURCE:
            piece = _module_piece(fam, MultiDegree(deg.n0 - 1, deg.n))
        else:
            shifted = tuple(ni - (1 if i == src else 0) for i, ni in enumerate(deg.n))
            piece = _module_piece(fam, MultiDegree(deg.n0, shifted))
        out = ideal_sum(out, ideal_product(_principal(ctx, u), piece))
    return out


def _rhs_pure(fam: IdealFamily, cand: JointReductionCandidate, n: tuple[int, ...]) -> MonomialIdeal:
    ctx = fam.ctx
    out = fam.module.relations
    for u, src in cand.elements:
        shifted = tuple(ni - (1 if i == src else 0) for i, ni in enumerate(n))
        piece = _module_piece(fam, MultiDegree(0, shifted))
        out = ideal_sum(out, ideal_product(_principal(ctx, u), piece))
    return out


def _check_window(lhs_of, rhs_of, degrees, base, extent) -> ContainmentCertificate:
    for deg in degrees:
        lhs = lhs_of(deg)
        rhs = rhs_of(deg)
        for g in lhs.gens:
            if not rhs.contains(Monomial(g)):
                return ContainmentCertificate(False, base, extent, (deg, Monomial(g)))
    return ContainmentCertificate(True, base, extent)


def verify_joint_reduction(fam: IdealFamily, cand: JointReductionCandidate) -> ContainmentCertificate:
    """Certify the defining containment of a joint-reduction candidate.

    Checks every multidegree in a box of large degrees; the right-to-left
    inclusion is automatic, so only minimal generators of the left side are
    tested for membership in the right side modulo the relations.
    """
    cand.check_membership(fam)
    base = initial_offset(fam)
    extent = BAND_EXTENT
    q = fam.module.relations
    if cand.is_pure:
        boxes = itertools.product(*(range(base, base + extent) for _ in range(fam.d)))
        return _check_window(
            lambda n: ideal_sum(_module_piece(fam, MultiDegree(0, n)), q),
            lambda n: _rhs_pure(fam, cand, n),
            list(boxes),
            base,
            extent,
        )
    boxes = itertools.product(*(range(base, base + extent) for _ in range(fam.d + 1)))
    degrees = [MultiDegree(pt[0], pt[1:]) for pt in boxes]
    return _check_window(
        lambda deg: ideal_sum(_module_piece(fam, deg), q),
        lambda deg: _rhs_joint(fam, cand, deg),
        degrees,
        base,
        extent,
    )


def is_reduction(i: MonomialIdeal, gens, module: QuotientModule) -> ContainmentCertificate:
    """Whether finitely many elements of `i` generate i^(n+1)M from i^nM."""
    ctx = module.ctx
    sub = ideal(ctx, list(gens))
    if not i.contains_ideal(sub):
        raise ValueError("reduction candidates must lie in the ideal")
    q = module.relations
    degs = [i.max_generator_degree(), q.max_generator_degree()]
    dim = krull_dim(module)
    base = max(1, (0 if dim == float("-inf") else int(dim)) + max(degs))
    extent = BAND_EXTENT
    t = module.top
    for n in range(base, base + extent):
        lhs = ideal_sum(ideal_product(ideal_power(i, n + 1), t), q)
        rhs = ideal_sum(ideal_product(sub, ideal_product(ideal_power(i, n), t)), q)
        for g in lhs.gens:
            if not rhs.contains(Monomial(g)):
                return ContainmentCertificate(False, base, extent, ((n,), Monomial(g)))
    return ContainmentCertificate(True, base, extent)


def is_filter_regular(fam: IdealFamily, u: Monomial) -> bool:
    """Whether the annihilator of u is contained in the I-power torsion."""
    q = fam.module.relations
    return saturation(q, fam.product_ideal()).contains_ideal(colon_by_monomial(q, u))


def is_rees_superficial(fam: IdealFamily, u: Monomial, i: int) -> ContainmentCertificate:
    """Check (u)M meet I^n I_i M = u I^n M on a window of large n."""
    if not fam.ideals[i].contains(u):
        raise ValueError("element must lie in the indexed ideal")
    ctx = fam.ctx
    q = fam.module.relations
    pu = _principal(ctx, u)
    base = initial_offset(fam)
    extent = BAND_EXTENT
    t = fam.module.top
    for n in itertools.product(*(range(base, base + extent) for _ in range(fam.d))):
        blob = ideal_product(weighted_power(fam, MultiDegree(0, n)), t)
        lhs = ideal_intersection(
            ideal_sum(ideal_product(pu, t), q),
            ideal_sum(ideal_product(blob, fam.ideals[i]), q),
        )
        rhs = ideal_sum(ideal_product(pu, blob), q)
        for g in lhs.gens:
            if not rhs.contains(Monomial(g)):
                return ContainmentCertificate(False, base, extent, (n, Monomial(g)))
    return ContainmentCertificate(True, base, extent)


def is_weak_fc(fam: IdealFamily, u: Monomial, i: int) -> bool:
    """Rees superficial and I-filter-regular at once."""
    return is_rees_superficial(fam, u, i).holds and is_filter_regular(fam, u)


def is_system_of_parameters(module: QuotientModule, elems) -> bool:
    """Exactly dim-many elements cutting the module down to dimension <= 0."""
    elems = list(elems)
    dim = krull_dim(module)
    if dim == float("-inf"):
        return False
    if len(elems) != int(dim):
        return False
    if not elems:
        return True
    cut = krull_dim(module.quotient_by_elements(elems))
    return cut == float("-inf") or cut <= 0


def is_multiplicity_system(module: QuotientModule, elems) -> bool:
    """Whether the elements generate an ideal of definition for the module."""
    if module.is_zero():
        return True
    return module.quotient_by_elements(list(elems)).length() != float("inf")


# -- search ----------------------------------------------------------------


@dataclass(frozen=True)
class PoolPolicy:
    """Bounds on the joint-reduction search: pool degree and verify budget."""

    max_degree: int = 2
    include_products: bool = True
    budget: int = 2000


def _element_pool(source_ideal: MonomialIdeal, policy: PoolPolicy) -> list[Monomial]:
    gens = [Monomial(g) for g in source_ideal.gens]
    pool = {g for g in gens if g.degree <= policy.max_degree}
    if policy.include_products:
        for a, b in itertools.combinations_with_replacement(gens, 2):
            p = a * b
            if p.degree <= policy.max_degree:
                pool.add(p)
    return sorted(pool, key=lambda u: _grlex_key(u.exponents))


def search_joint_reduction(
    fam: IdealFamily, mt: MixedType, policy: PoolPolicy = PoolPolicy()
) -> JointReductionCandidate | None:
    """First certified candidate of the given type in deterministic pool order.

    Pools are minimal generators plus their pairwise products up to the policy
    degree bound; tuples are tried in graded lexicographic order, stopping when
    the verification budget runs out.  Returns None when nothing certifies,
    which is inconclusive: monomial pools cannot witness nonexistence.
    """
    if len(mt.k) != fam.d:
        raise ValueError("type has wrong axis count")
    per_source = []
    for i, ki in enumerate(mt.k):
        pool = _element_pool(fam.ideals[i], policy)
        per_source.append(list(itertools.combinations_with_replacement(pool, ki)))
    j_pool = _element_pool(fam.j, policy)
    per_source.append(list(itertools.combinations_with_replacement(j_pool, mt.k0 + 1)))
    tried = 0
    for combo in itertools.product(*per_source):
        elements = []
        for i, block in enumerate(combo[:-1]):
            elements.extend((u, i) for u in block)
        elements.extend((u, J_SOURCE) for u in combo[-1])
        cand = JointReductionCandidate(tuple(elements), mt)
        try:
            cand.check_membership(fam)
        except ValueError:
            continue
        tried += 1
        if tried > policy.budget:
            return None
        if verify_joint_reduction(fam, cand).holds:
            return cand
    return None

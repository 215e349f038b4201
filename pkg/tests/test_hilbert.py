"""Unit tests for Hilbert functions, interpolation, and mixed multiplicities."""

from fractions import Fraction

import pytest

from multimult.hilbert import (
    BinomialBasisPolynomial,
    HilbertTable,
    IdealFamily,
    MixedType,
    MultiDegree,
    interpolate,
    hf_F,
    hf_P,
    mixed_multiplicity,
    table_on_window,
)
from multimult.monomials import (
    MINUS_INFINITY,
    MonomialIdeal,
    QuotientModule,
    RingContext,
    ideal,
    krull_dim,
)

C1 = RingContext(1)
C2 = RingContext(2)
C4 = RingContext(4)


def family_1var():
    x = ideal(C1, [(1,)])
    return IdealFamily(x, (x,), QuotientModule.free(C1))


def family_2var():
    m = ideal(C2, [(1, 0), (0, 1)])
    return IdealFamily(m, (m,), QuotientModule.free(C2))


def family_dim4():
    i1 = ideal(C4, [(1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0)])
    i2 = ideal(C4, [(0, 0, 1, 0)])
    j = ideal(C4, [(1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1)])
    return IdealFamily(j, (i1, i2), QuotientModule.free(C4))


class TestFamilyValidation:
    def test_j_must_be_primary(self):
        with pytest.raises(ValueError):
            IdealFamily(ideal(C2, [(1, 0)]), (ideal(C2, [(1, 0)]),), QuotientModule.free(C2))

    def test_need_an_ideal(self):
        m = ideal(C2, [(1, 0), (0, 1)])
        with pytest.raises(ValueError):
            IdealFamily(m, (), QuotientModule.free(C2))


class TestHilbertFunctions:
    def test_hf_p_1var(self):
        fam = family_1var()
        for n0 in range(4):
            for n in range(4):
                assert hf_P(fam, MultiDegree(n0, (n,))) == 1

    def test_hf_f_1var(self):
        fam = family_1var()
        for n0 in range(4):
            for n in range(4):
                assert hf_F(fam, MultiDegree(n0, (n,))) == n0

    def test_hf_f_zero_at_n0_zero(self):
        assert hf_F(family_2var(), MultiDegree(0, (5,))) == 0

    def test_zero_module(self):
        m = ideal(C2, [(1, 0), (0, 1)])
        fam = IdealFamily(m, (m,), QuotientModule(C2, MonomialIdeal.unit(C2)))
        assert hf_P(fam, MultiDegree(2, (3,))) == 0
        assert hf_F(fam, MultiDegree(2, (3,))) == 0

    def test_hf_p_2var(self):
        # ell(m^t / m^(t+1)) = t+1 in two variables
        fam = family_2var()
        assert hf_P(fam, MultiDegree(2, (3,))) == 6


class TestBinomialBasisPolynomial:
    def test_evaluate(self):
        p = BinomialBasisPolynomial(2, {(1, 1): Fraction(1)})
        assert p.evaluate((2, 3)) == 12

    def test_difference_identity(self):
        p = BinomialBasisPolynomial(2, {(1, 1): Fraction(2), (0, 0): Fraction(5)})
        assert p.difference(MixedType(0, (0,))) == p

    def test_difference_of_constant_is_zero(self):
        p = BinomialBasisPolynomial(2, {(0, 0): Fraction(7)})
        assert p.difference(MixedType(1, (0,))).is_zero()

    def test_difference_drops_to_constant(self):
        p = BinomialBasisPolynomial(2, {(1, 1): Fraction(1)})
        d = p.difference(MixedType(1, (1,)))
        assert d.coeffs == {(0, 0): Fraction(1)}

    def test_difference_matches_pointwise(self):
        p = BinomialBasisPolynomial(2, {(2, 1): Fraction(3), (1, 0): Fraction(-2)})
        d = p.difference(MixedType(1, (0,)))
        for a in range(5):
            for b in range(5):
                assert d.evaluate((a, b)) == p.evaluate((a + 1, b)) - p.evaluate((a, b))

    def test_total_degree(self):
        p = BinomialBasisPolynomial(2, {(2, 1): Fraction(3)})
        assert p.total_degree == 3
        assert BinomialBasisPolynomial.zero(2).total_degree == MINUS_INFINITY


class TestInterpolation:
    def test_constant_1var(self):
        fit = interpolate(family_1var(), "P")
        assert fit.poly.coeffs == {(0, 0): Fraction(1)}

    def test_f_1var(self):
        fit = interpolate(family_1var(), "F")
        # F(n0, n) = n0 = binom(n0+1,1) - 1
        assert fit.poly.coeffs == {(1, 0): Fraction(1), (0, 0): Fraction(-1)}

    def test_2var_top_coefficient(self):
        # P(n0, n) = n0 + n + 1; the coefficient at (0,(1)) is the classical
        # mixed multiplicity e(m|m) = 1.
        fit = interpolate(family_2var(), "P")
        assert fit.poly.coefficient((0, 1)) == 1
        assert fit.poly.coefficient((1, 0)) == 1
        assert fit.poly.total_degree == 1

    def test_degree_law(self):
        for fam in (family_1var(), family_2var(), family_dim4()):
            q = krull_dim(fam.saturated_module())
            fit = interpolate(fam, "P")
            assert fit.poly.total_degree == q - 1

    def test_zero_module_gives_zero_poly(self):
        m = ideal(C2, [(1, 0), (0, 1)])
        fam = IdealFamily(m, (m,), QuotientModule(C2, MonomialIdeal.unit(C2)))
        assert interpolate(fam, "P").poly.is_zero()

    def test_f_p_compatibility(self):
        # The first difference of F along axis 0 equals P on a common window.
        for fam in (family_1var(), family_2var()):
            fit_f = interpolate(fam, "F")
            base, extent = fit_f.base, fit_f.extent
            tbl_f = table_on_window(fam, "F", base, extent)
            tbl_p = table_on_window(fam, "P", base, extent)
            num_axes = fam.d + 1
            diff = tbl_f.difference(MixedType(1, (0,) * fam.d))
            sliced = tbl_p.values[tuple(slice(0, s) for s in diff.values.shape)]
            assert (diff.values == sliced).all()


class TestMixedMultiplicity:
    def test_2var_classical(self):
        value, defined = mixed_multiplicity(family_2var(), MixedType(0, (1,)))
        assert value == 1
        assert defined

    def test_1var_vanishing(self):
        value, defined = mixed_multiplicity(family_1var(), MixedType(0, (1,)))
        assert value == 0
        assert defined

    def test_undefined_below_top(self):
        # In two variables the coefficient at (1,(1)) is 1, so the index
        # (0,(1)) sits below a nonzero coefficient along axis 0 only; the
        # strictly-greater index (1,(1)) does not dominate (0,(2)).
        value, defined = mixed_multiplicity(family_2var(), MixedType(0, (0,)))
        assert not defined

    def test_dim4_maximal_degrees(self):
        value, defined = mixed_multiplicity(family_dim4(), MixedType(2, (0, 1)))
        assert value == 0
        assert defined


class TestHilbertTable:
    def test_difference_shrinks(self):
        import numpy as np

        t = HilbertTable((0, 0), np.arange(9).reshape(3, 3))
        d = t.difference(MixedType(1, (0,)))
        assert d.values.shape == (2, 3)
        assert (d.values == 3).all()

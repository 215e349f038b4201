"""Exact mixed multiplicities of monomial ideals.

The package computes multigraded Hilbert polynomials of families of monomial
ideals over a localized polynomial ring, extracts mixed multiplicities of
maximal degrees, certifies joint reductions, evaluates the recursive
multiplicity symbol, and cross-checks everything through Euler characteristics
of multigraded Koszul strands.  All arithmetic is exact.
"""

from .monomials import (
    INFINITE,
    MINUS_INFINITY,
    ContextMismatchError,
    Monomial,
    MonomialIdeal,
    QuotientModule,
    RingContext,
    colon_by_ideal,
    colon_by_monomial,
    graded_quotient_length,
    ideal,
    ideal_intersection,
    ideal_power,
    ideal_product,
    ideal_sum,
    krull_dim,
    saturation,
    standard_monomials,
)

__all__ = [
    "INFINITE",
    "MINUS_INFINITY",
    "ContextMismatchError",
    "Monomial",
    "MonomialIdeal",
    "QuotientModule",
    "RingContext",
    "colon_by_ideal",
    "colon_by_monomial",
    "graded_quotient_length",
    "ideal",
    "ideal_intersection",
    "ideal_power",
    "ideal_product",
    "ideal_sum",
    "krull_dim",
    "saturation",
    "standard_monomials",
]

__version__ = "0.1.0"

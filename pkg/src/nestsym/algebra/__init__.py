"""Exact arithmetic foundation: scalars, coordinate polynomials, linear solves."""
from .scalars import (
    I,
    ONE,
    ZERO,
    GaussianRational,
    NotDivisible,
    ParamMonomial,
    ParamScalar,
    exact_divide,
    scalar_arith,
    unknown_symbol,
)
from .polynomials import (
    COORD_NAMES,
    NDIM,
    CoordPolynomial,
    coord_monomial,
    coordinate,
    monomials_up_to,
)
from .linear import (
    LinearSystem,
    fraction_free_rref,
    normalize_leading,
    nullspace,
    rank,
    reduce_against,
    solve_combination,
)

__all__ = [
    "I", "ONE", "ZERO", "GaussianRational", "NotDivisible", "ParamMonomial",
    "ParamScalar", "exact_divide", "scalar_arith", "unknown_symbol",
    "COORD_NAMES", "NDIM", "CoordPolynomial", "coord_monomial", "coordinate",
    "monomials_up_to", "LinearSystem", "fraction_free_rref", "normalize_leading",
    "nullspace", "rank", "reduce_against", "solve_combination",
]

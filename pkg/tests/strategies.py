"""Hypothesis strategies for small random algebraic objects."""
from fractions import Fraction

from hypothesis import strategies as st

from nestsym.algebra import CoordPolynomial, GaussianRational, ParamMonomial, ParamScalar
from nestsym.diffop import DiffOp

PARAMS = ("hbar", "m", "c")

rationals = st.builds(Fraction, st.integers(-4, 4), st.integers(1, 3))
gaussians = st.builds(GaussianRational, rationals, rationals)
monomials = st.dictionaries(st.sampled_from(PARAMS), st.integers(-2, 2), max_size=2).map(ParamMonomial)
scalars = st.lists(st.tuples(monomials, gaussians), max_size=3).map(lambda ts: ParamScalar(dict(ts)))
nonzero_scalars = scalars.filter(bool)

coord_monos = st.tuples(*[st.integers(0, 2)] * 4).filter(lambda m: sum(m) <= 2)
polys = st.lists(st.tuples(coord_monos, scalars), max_size=3).map(CoordPolynomial)

deriv_indices = st.tuples(*[st.integers(0, 2)] * 4).filter(lambda a: sum(a) <= 2)
diffops = st.lists(st.tuples(deriv_indices, polys), max_size=3).map(
    lambda ts: sum((DiffOp.multiplication(p) * DiffOp.derivative(*a) for a, p in ts), DiffOp())
)

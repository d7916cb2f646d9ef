from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nestsym.algebra import (
    I,
    ONE,
    ZERO,
    CoordPolynomial,
    GaussianRational,
    NotDivisible,
    ParamMonomial,
    ParamScalar,
    coordinate,
    exact_divide,
    nullspace,
    scalar_arith,
    solve_combination,
)

import properties
from strategies import gaussians, nonzero_scalars, polys, scalars

hbar = ParamScalar.symbol("hbar")
m = ParamScalar.symbol("m")
c = ParamScalar.symbol("c")
i = ParamScalar.const(I)


class TestGaussianRational:
    def test_lowest_terms(self):
        z = GaussianRational(Fraction(2, 4), Fraction(-6, 3))
        assert (z.re, z.im) == (Fraction(1, 2), -2)

    def test_unit_squared(self):
        assert I * I == GaussianRational(-1)

    def test_immutable(self):
        with pytest.raises(AttributeError):
            I.re = 3

    @given(gaussians)
    def test_inverse(self, z):
        if z:
            assert z * z.inverse() == GaussianRational(1)


class TestScalarArith:
    def test_exponent_addition(self):
        assert scalar_arith(hbar * m ** -1, hbar * m, "mul") == hbar ** 2

    def test_like_terms_merge(self):
        half = hbar ** 2 * m ** -1 * Fraction(1, 2)
        assert scalar_arith(half, half, "add") == hbar ** 2 * m ** -1

    def test_gaussian_unit(self):
        assert scalar_arith(i, i, "mul") == ParamScalar.const(-1)

    def test_sub(self):
        assert scalar_arith(hbar, hbar, "sub") == ZERO

    def test_zero_exponents_dropped(self):
        assert (hbar * hbar ** -1) == ONE
        assert ParamMonomial({"hbar": 0, "m": 1}) == ParamMonomial({"m": 1})

    def test_undeclared_parameter_rejected(self):
        with pytest.raises(ValueError):
            ParamScalar.symbol("q")

    def test_terms_sorted(self):
        s = m + hbar + c ** 2 + ONE
        keys = [k for k, _ in s.terms]
        assert keys == sorted(keys)

    def test_text_form(self):
        assert str(hbar ** 2 * m ** -1 * Fraction(1, 2)) == "1/2*hbar^2/m"
        assert str(i * hbar) == "i*hbar"

    def test_evaluate(self):
        assert (i * hbar ** 2 * m ** -1).evaluate({"hbar": 2, "m": 4}) == 1j

    def test_ring_axioms(self):
        properties.ring_axioms()

    def test_canonicalization_idempotent(self):
        properties.canonicalization_idempotent()


class TestExactDivide:
    def test_monomial_quotient(self):
        a = i * hbar ** 2 * m ** -1 * 4
        assert exact_divide(a, i * hbar) == hbar * m ** -1 * 4

    def test_zero_dividend(self):
        assert exact_divide(ZERO, i * hbar) == ZERO

    def test_laurent_units_divide(self):
        # monomials are units, so (hbar + m)/hbar = 1 + m/hbar exists
        assert exact_divide(hbar + m, hbar) == ONE + m * hbar ** -1

    def test_not_divisible(self):
        with pytest.raises(NotDivisible):
            exact_divide(ONE, hbar + m)
        with pytest.raises(NotDivisible):
            exact_divide(hbar ** 2 + m ** 2, hbar + m)

    def test_polynomial_quotient(self):
        assert exact_divide(hbar ** 2 - m ** 2, hbar + m) == hbar - m

    def test_zero_divisor(self):
        with pytest.raises(ZeroDivisionError):
            exact_divide(hbar, ZERO)

    @settings(max_examples=1000, deadline=None)
    @given(scalars, nonzero_scalars)
    def test_divide_product(self, a, b):
        assert exact_divide(a * b, b) == a


class TestCoordPolynomial:
    def test_degree(self):
        p = coordinate(0) * coordinate(1) ** 2 + coordinate(3)
        assert p.degree == 3
        assert CoordPolynomial().degree == -1

    def test_derivative(self):
        p = coordinate(1) ** 3
        assert p.derivative((0, 2, 0, 0)) == coordinate(1).scale(6)

    @given(polys, polys, polys)
    def test_ring_axioms(self, a, b, x):
        assert (a + b) * x == a * x + b * x
        assert a * b == b * a

    @given(polys, polys)
    def test_product_rule(self, a, b):
        e = (0, 1, 0, 0)
        assert (a * b).derivative(e) == a.derivative(e) * b + a * b.derivative(e)


_system = properties.system


class TestNullspace:
    def test_single_equation(self):
        assert nullspace(_system([[1, 1]], 2)) == [(ONE, -ONE)]

    def test_parametric_equation(self):
        (v,) = nullspace(_system([[hbar, -m]], 2))
        assert v == (m, hbar)

    def test_empty_system(self):
        basis = nullspace(_system([], 3))
        assert len(basis) == 3

    def test_full_rank(self):
        assert nullspace(_system([[1, 0], [0, hbar]], 2)) == []

    def test_rejects_unknown_symbols(self):
        with pytest.raises(ValueError):
            _system([[ParamScalar.symbol("u0"), 1]], 2)

    def test_solve_combination(self):
        cols = [{"a": ONE}, {"b": hbar}]
        assert solve_combination(cols, {"a": m, "b": hbar * c}) == [m, c]
        assert solve_combination(cols, {"z": ONE}) is None

    def test_back_substitution(self):
        properties.back_substitution()

    @given(st.integers(2, 4), st.data())
    def test_dimension_permutation_invariant(self, n, data):
        rows = [[data.draw(scalars) for _ in range(n)] for _ in range(2)]
        system = _system(rows, n)
        order = data.draw(st.permutations(range(n)))
        assert len(nullspace(system.permuted(order))) == len(nullspace(system))

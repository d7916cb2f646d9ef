from itertools import product

import pytest
from hypothesis import given

from nestsym import catalog
from nestsym.algebra import I, CoordPolynomial, ParamScalar, coordinate
from nestsym.diffop import (
    DiffOp,
    MalformedBase,
    NotMultiple,
    apply,
    commutator,
    compose,
    nested_commutator,
    reduce_mod,
    symbol_value,
)

import properties
from strategies import diffops

hbar = ParamScalar.symbol("hbar")
m = ParamScalar.symbol("m")
c = ParamScalar.symbol("c")
i = ParamScalar.const(I)
Ls = catalog.schrodinger()


def d(*idx):
    alpha = [0, 0, 0, 0]
    for a in idx:
        alpha[a] += 1
    return DiffOp.derivative(*alpha)


def x(a):
    return DiffOp.multiplication(coordinate(a))


def mul(p):
    return DiffOp.multiplication(CoordPolynomial.coerce(p))


class TestCompose:
    def test_one_variable_leibniz(self):
        assert compose(d(1), x(1) * d(1)) == x(1) * d(1, 1) + d(1)

    def test_derivative_right_of_coefficient(self):
        assert compose(x(1) * d(1), d(1)) == x(1) * d(1, 1)

    def test_second_order_on_square(self):
        sq = mul(coordinate(1) ** 2)
        expected = sq * d(1, 1) + (x(1) * d(1)).scale(4) + mul(2)
        assert compose(d(1, 1), sq) == expected

    def test_associative(self):
        properties.compose_associative()


class TestCommutator:
    def test_heisenberg(self):
        assert commutator(d(1), x(1)) == mul(1)

    def test_schrodinger_with_lorentz_generator(self):
        expected = d(1).scale(i * hbar * c) + d(0, 1).scale(hbar ** 2 * m ** -1 * c ** -1)
        assert commutator(Ls, catalog.lorentz_boost(1)) == expected

    def test_schrodinger_with_galilei_boost(self):
        assert commutator(Ls, catalog.H(1)) == DiffOp()

    def test_jacobi(self):
        properties.jacobi()

    def test_bilinear(self):
        properties.bilinear()

    @given(diffops, diffops)
    def test_antisymmetric(self, a, b):
        assert commutator(a, b) == -commutator(b, a)

    @given(diffops, diffops)
    def test_constant_coefficients_commute(self, a, b):
        strip = lambda op: DiffOp.from_vector({(al, mo): s for (al, mo), s in op.to_vector().items() if not any(mo)})
        assert commutator(strip(a), strip(b)) == DiffOp()

    @given(diffops)
    def test_text_round_trip(self, a):
        from nestsym.cli import parse_operator

        assert parse_operator(str(a)) == a


class TestNested:
    def test_lorentz_generators_depth_two(self):
        for k in (1, 2, 3):
            assert nested_commutator(Ls, catalog.lorentz_boost(k), 2) == DiffOp()

    def test_q1_gives_multiple_of_operator(self):
        assert nested_commutator(Ls, catalog.Q1(), 2) == Ls.scale(i * hbar * 4)

    def test_cubic_field_depth_four(self):
        for a, b, e, f in [(0, 0, 0, 0), (1, 2, 3, 0), (0, 1, 1, 3), (2, 2, 2, 2)]:
            assert nested_commutator(Ls, catalog.monomial_field((a, b, e), f), 4) == DiffOp()

    def test_depth_must_be_positive(self):
        with pytest.raises(ValueError):
            nested_commutator(Ls, d(0), 0)


def _printed_laplacian_bracket(indices, target):
    """Right-hand sides of the printed [Laplacian, x_a ... d_target] table."""
    out = DiffOp()
    n = len(indices)
    for k in (1, 2, 3):
        for pos in range(n):
            if indices[pos] == k:
                rest = indices[:pos] + indices[pos + 1:]
                out = out + (catalog.monomial_field(rest, target) * d(k)).scale(2)
        for p1 in range(n):
            for p2 in range(p1 + 1, n):
                if indices[p1] == k and indices[p2] == k:
                    rest = tuple(a for q, a in enumerate(indices) if q not in (p1, p2))
                    out = out + catalog.monomial_field(rest, target).scale(2)
    return out


class TestLaplacianTable:
    @pytest.mark.parametrize("degree", [0, 1, 2, 3])
    def test_all_index_choices(self, degree):
        lap = catalog.laplacian()
        for idx in product(range(4), repeat=degree):
            for target in range(4):
                field = catalog.monomial_field(idx, target)
                assert commutator(lap, field) == _printed_laplacian_bracket(idx, target), (idx, target)


def _printed_triple(a, b, e, f):
    """The printed four-group expansion of the triple commutator with x_a x_b x_c d_d."""
    dl = lambda p, q: 1 if p == q else 0
    out = d(f).scale(-6 * i * hbar ** 3 * dl(0, a) * dl(0, b) * dl(0, e))
    for k in (1, 2, 3):
        w = dl(k, a) * dl(0, b) * dl(0, e) + dl(k, b) * dl(0, e) * dl(0, a) + dl(k, e) * dl(0, a) * dl(0, b)
        out = out + d(k, f).scale(-6 * w * hbar ** 4 * m ** -1)
        for j in (1, 2, 3):
            w = dl(k, a) * dl(j, b) * dl(0, e) + dl(k, b) * dl(j, e) * dl(0, a) + dl(k, e) * dl(j, a) * dl(0, b)
            out = out + d(j, k, f).scale(6 * w * i * hbar ** 5 * m ** -2)
            for q in (1, 2, 3):
                w = dl(k, a) * dl(j, b) * dl(q, e) + dl(k, b) * dl(j, e) * dl(q, a) + dl(k, e) * dl(j, a) * dl(q, b)
                out = out + d(j, k, q, f).scale(2 * w * hbar ** 6 * m ** -3)
    return out


def test_triple_commutator_expansion():
    for a, b, e, f in product(range(4), repeat=4):
        got = nested_commutator(Ls, catalog.monomial_field((a, b, e), f), 3)
        assert got == _printed_triple(a, b, e, f), (a, b, e, f)


class TestReduceMod:
    def test_scalar_multiple(self):
        assert reduce_mod(Ls.scale(i * hbar * 4), Ls, 0) == CoordPolynomial.const(i * hbar * 4)

    def test_zero(self):
        assert reduce_mod(DiffOp(), Ls, 0) == CoordPolynomial()

    def test_first_order_not_multiple(self):
        with pytest.raises(NotMultiple):
            reduce_mod(d(1), Ls, 2)

    def test_coordinate_multiple(self):
        zeta = coordinate(0).scale(-2 * i)
        assert reduce_mod(mul(zeta) * Ls, Ls, 1) == zeta
        with pytest.raises(NotMultiple):
            reduce_mod(mul(zeta) * Ls, Ls, 0)

    def test_malformed_base(self):
        with pytest.raises(MalformedBase):
            reduce_mod(d(0), x(0) * d(0), 0)


class TestApply:
    def test_derivative(self):
        assert apply(d(1), coordinate(1) ** 2) == coordinate(1).scale(2)

    def test_schrodinger_on_linear(self):
        assert apply(Ls, coordinate(1)) == CoordPolynomial()

    def test_schrodinger_on_square(self):
        assert apply(Ls, coordinate(1) ** 2) == CoordPolynomial.const(hbar ** 2 * m ** -1)

    @given(diffops, diffops)
    def test_apply_respects_composition(self, a, b):
        f = coordinate(0) ** 2 * coordinate(1) + coordinate(2) * coordinate(3) ** 2
        assert apply(compose(a, b), f) == apply(a, apply(b, f))


def test_symbol_matches_plane_wave_dispersion():
    vals = {"hbar": 1.5, "m": 2.0}
    r = symbol_value(Ls, vals, sigma=0.7, kappa=(0.1, 0.2, -0.3))
    expected = 1.5 * 0.7 - 1.5 ** 2 * (0.01 + 0.04 + 0.09) / (2 * 2.0)
    assert r == pytest.approx(expected)

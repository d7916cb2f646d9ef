import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from nestsym.waves import (
    BoostSpec,
    KinematicsUndefined,
    OperatorBinding,
    ParticleState,
    PhaseForm,
    ZeroVelocity,
    boost_coordinates,
    boost_state,
    boosted_beta_sq,
    dispersion_residual,
    galilei_weight,
    lorentz_weight_phi1,
    lorentz_weight_phi2,
    make_solutions,
    massless_weight,
    nonrel_limit_gap,
    nonrel_phi2,
    rotate_phase,
    rotation_aligning,
    solution,
    two_component_check,
    verify_weight_set,
    weight_function,
)

SWEEP = settings(max_examples=100, deadline=None)
unit = st.tuples(*[st.floats(-1, 1, allow_nan=False)] * 3).filter(lambda u: 0.1 < np.linalg.norm(u))


def massive(speed, direction, m0=1.0, c=1.0):
    n = np.asarray(direction, dtype=float)
    return ParticleState.massive(m0, tuple(speed * n / np.linalg.norm(n)), c)


class TestPhaseForm:
    def test_zero_form_is_one(self):
        assert PhaseForm()(1.3, (0.2, 0.4, 5.0)) == 1

    def test_product_adds_exponents(self):
        a, b = PhaseForm(1, (1, 2, 3)), PhaseForm(0.5, (0, -1, 2))
        t, x = 0.7, (0.1, -0.3, 1.2)
        assert abs((a * b)(t, x) - a(t, x) * b(t, x)) < 1e-14
        assert abs((a / b)(t, x) - a(t, x) / b(t, x)) < 1e-14

    def test_rejects_nonfinite(self):
        with pytest.raises(ValueError):
            PhaseForm(math.inf, (0, 0, 0))

    def test_from_exponent(self):
        assert PhaseForm.from_exponent(2, 4, (2, 6, 0)) == PhaseForm(2, (1, 3, 0))


class TestDispersion:
    def test_schrodinger_plane_wave(self):
        m, p = Fraction(3), (Fraction(1), Fraction(2), Fraction(-1))
        E = sum(q * q for q in p) / (2 * m)
        wave = PhaseForm.from_exponent(Fraction(1, 2), E, p)
        assert dispersion_residual(OperatorBinding(hbar=Fraction(1, 2), m0=m), wave) == 0

    def test_relativistic_sample(self):
        state = ParticleState.massive(1, (0.6, 0, 0), 1)
        binding = OperatorBinding("relativistic", state=state)
        for phi in make_solutions(state, binding):
            assert abs(dispersion_residual(binding, phi)) <= 1e-12

    @SWEEP
    @given(st.floats(0.01, 0.99), unit, st.floats(0.2, 5), st.floats(0.3, 3), st.floats(0.5, 2))
    def test_relativistic_sweep(self, beta, n, m0, c, hbar):
        state = massive(beta * c, n, m0, c)
        binding = OperatorBinding("relativistic", hbar=hbar, m0=m0, c=c, state=state)
        for phi in make_solutions(state, binding):
            r = dispersion_residual(binding, phi)
            assert abs(r) <= 1e-12 * max(1.0, hbar * abs(phi.sigma))

    def test_dalembert(self):
        b = OperatorBinding("dalembert", w=0.5)
        assert dispersion_residual(b, PhaseForm(1.0, (2.0, 0, 0))) == 0

    def test_relativistic_needs_state(self):
        with pytest.raises(ValueError):
            OperatorBinding("relativistic")


class TestSolutions:
    def test_zero_velocity(self):
        with pytest.raises(ZeroVelocity):
            make_solutions(ParticleState.massive(1, (0, 0, 0)))
        with pytest.raises(ZeroVelocity):
            ParticleState.massive(1, (0, 0, 0)).n

    def test_massless_phase_velocities(self):
        for c in (1.0, 3.0):
            state = ParticleState.massless_state(1.0, (1, 0, 0), c)
            phi1, phi2 = make_solutions(state)
            assert abs(phi1.phase_velocity() - c / 2) <= 1e-12
            assert abs(phi2.phase_velocity() - c / math.sqrt(2)) <= 1e-12

    @given(st.floats(0.01, 0.99), unit)
    def test_massive_phi1_phase_velocity_is_half_speed(self, beta, n):
        state = massive(beta, n)
        assert math.isclose(solution("phi1", state).phase_velocity(), beta / 2, rel_tol=1e-12)

    def test_superluminal_rejected(self):
        with pytest.raises(ValueError):
            ParticleState.massive(1, (1.0, 0, 0), 1)

    def test_nonrel_phi2_form(self):
        state = massive(1e-4, (1, 0, 0))
        assert solution("phi2", state).distance(nonrel_phi2(1, state.v)) < 1e-7


class TestBoosts:
    def test_galilei(self):
        assert boost_coordinates(BoostSpec("galilei", 2), (1, 3, 4, 5)) == (1, 1, 4, 5)

    def test_lorentz_identity(self):
        assert boost_coordinates(BoostSpec("lorentz", 0, 2), (1, 3, 4, 5)) == (1, 3, 4, 5)

    def test_lorentz_needs_subluminal(self):
        with pytest.raises(ValueError):
            BoostSpec("lorentz", 1.0, 1.0)

    @given(st.floats(-0.9, 0.9), st.floats(0.5, 3), st.tuples(*[st.floats(-5, 5)] * 4))
    def test_interval_preserved(self, beta, c, event):
        t, x, y, z = event
        t2, x2, y2, z2 = boost_coordinates(BoostSpec("lorentz", beta * c, c), event)
        assert math.isclose(t2 ** 2 - x2 ** 2 / c ** 2, t ** 2 - x ** 2 / c ** 2, abs_tol=1e-9)
        assert (y2, z2) == (y, z)

    @given(st.floats(-3, 3), st.floats(-3, 3))
    def test_galilei_composition(self, u, w):
        e = (Fraction(3), Fraction(1), Fraction(0), Fraction(2))
        u, w = Fraction(u), Fraction(w)
        twice = boost_coordinates(BoostSpec("galilei", u), boost_coordinates(BoostSpec("galilei", w), e))
        assert twice == boost_coordinates(BoostSpec("galilei", u + w), e)

    @given(st.floats(-0.9, 0.9), st.floats(-0.9, 0.9))
    def test_lorentz_composition(self, u, w):
        e = (0.3, -1.2, 0.5, 2.0)
        twice = boost_coordinates(BoostSpec("lorentz", u), boost_coordinates(BoostSpec("lorentz", w), e))
        once = boost_coordinates(BoostSpec("lorentz", (u + w) / (1 + u * w)), e)
        np.testing.assert_allclose(twice, once, atol=1e-9)

    @SWEEP
    @given(st.floats(0.05, 0.95), unit, st.floats(-0.9, 0.9))
    def test_printed_beta_composition(self, beta, n, V):
        state = massive(beta, n)
        moved = boost_state(BoostSpec("lorentz", V), state)
        assert math.isclose(boosted_beta_sq(state, V), moved.beta ** 2, rel_tol=1e-9, abs_tol=1e-12)

    @given(st.floats(0.05, 0.95), unit, st.floats(-0.9, 0.9))
    def test_rest_mass_invariant(self, beta, n, V):
        moved = boost_state(BoostSpec("lorentz", V), massive(beta, n, m0=2.0))
        W, P = moved.W, np.array(moved.P)
        assert math.isclose(W ** 2 - P @ P, 4.0, rel_tol=1e-9)

    def test_galilei_massless_undefined(self):
        with pytest.raises(KinematicsUndefined):
            boost_state(BoostSpec("galilei", 0.1), ParticleState.massless_state(1, (1, 0, 0)))


class TestGalileiWeight:
    def test_matches_closed_form_exactly(self):
        m, V, hbar = Fraction(3, 2), Fraction(2, 7), Fraction(5, 3)
        state = ParticleState(m0=m, v=(Fraction(1, 3), Fraction(-1, 2), Fraction(2)))
        Phi = weight_function("schrodinger", BoostSpec("galilei", V), state, hbar)
        assert Phi == galilei_weight(m, V, hbar)
        assert isinstance(Phi.sigma, Fraction)

    def test_zero_boost_is_one(self):
        state = ParticleState(m0=2, v=(Fraction(1), 0, 0))
        assert weight_function("schrodinger", BoostSpec("galilei", 0), state) == PhaseForm()

    def test_weight_set(self):
        m, V = Fraction(2), Fraction(1, 3)
        state = ParticleState(m0=m, v=(Fraction(1, 2), Fraction(1, 5), 0))
        phi = solution("schrodinger", state)
        binding = OperatorBinding(m0=m)
        assert verify_weight_set(galilei_weight(m, V), phi, BoostSpec("galilei", V), binding) == 0
        assert verify_weight_set(PhaseForm(), phi, BoostSpec("galilei", 0), binding) == dispersion_residual(binding, phi)


class TestLorentzWeight:
    def test_phi1_matches_printed_sample(self):
        state = massive(0.5, (1, 0, 0))
        Phi = weight_function("phi1", BoostSpec("lorentz", 0.3), state)
        assert Phi.distance(lorentz_weight_phi1(state, 0.3)) < 1e-12

    @SWEEP
    @given(st.floats(0.05, 0.95), unit, st.floats(-0.9, 0.9))
    def test_phi1_matches_printed_sweep(self, beta, n, V):
        state = massive(beta, n)
        Phi = weight_function("phi1", BoostSpec("lorentz", V), state)
        assert Phi.distance(lorentz_weight_phi1(state, V)) < 1e-9

    def test_printed_phi2_off_in_x_momentum_term(self):
        # the printed Phi2 differs from the ratio construction by a single Px term
        state = massive(0.7, (0.6, 0.8, 0))
        V = 0.2
        ratio = weight_function("phi2", BoostSpec("lorentz", V), state)
        printed = lorentz_weight_phi2(state, V)
        bp = math.sqrt(boosted_beta_sq(state, V))
        gap = math.sqrt(2) * V ** 2 * (1 / state.beta - 1 / bp) / (1 - V ** 2)
        assert math.isclose(ratio.kappa[0] - printed.kappa[0], gap * state.P[0], rel_tol=1e-9)
        assert math.isclose(ratio.sigma, printed.sigma, rel_tol=1e-12)
        assert ratio.kappa[1:] == pytest.approx(printed.kappa[1:], rel=1e-12)

        binding = OperatorBinding("relativistic", state=state)
        phi2 = solution("phi2", state)
        assert abs(verify_weight_set(ratio, phi2, BoostSpec("lorentz", V), binding)) <= 1e-9
        assert abs(verify_weight_set(printed, phi2, BoostSpec("lorentz", V), binding)) > 1e-3

    @SWEEP
    @given(st.floats(0.05, 0.95), unit, st.floats(-0.9, 0.9), st.sampled_from(["phi1", "phi2"]))
    def test_ratio_weights_solve_set(self, beta, n, V, family):
        state = massive(beta, n)
        spec = BoostSpec("lorentz", V)
        assume(boost_state(spec, state).beta > 1e-3)
        binding = OperatorBinding("relativistic", state=state)
        Phi = weight_function(family, spec, state)
        r = verify_weight_set(Phi, solution(family, state), spec, binding)
        assert abs(r) <= 1e-9

    def test_boosted_rest_undefined_for_phi2(self):
        state = massive(0.5, (1, 0, 0))
        with pytest.raises(KinematicsUndefined):
            weight_function("phi2", BoostSpec("lorentz", 0.5), state)


class TestMassless:
    @SWEEP
    @given(st.floats(-0.9, 0.9), unit, st.floats(0.2, 3), st.sampled_from(["phi1", "phi2"]))
    def test_matches_printed(self, V, n, P, family):
        state = ParticleState.massless_state(P, n)
        spec = BoostSpec("lorentz", V)
        Phi = weight_function(family, spec, state)
        printed = massless_weight(family, P, state.direction, V)
        assert Phi.distance(printed) <= 1e-9 * max(1.0, P)

    @SWEEP
    @given(st.floats(-0.9, 0.9), unit, st.floats(0.2, 3))
    def test_weight_set(self, V, n, P):
        state = ParticleState.massless_state(P, n)
        spec = BoostSpec("lorentz", V)
        binding = OperatorBinding("massless", state=state)
        for family in ("phi1", "phi2"):
            Phi = massless_weight(family, P, state.direction, V)
            assert abs(verify_weight_set(Phi, solution(family, state), spec, binding)) <= 1e-9

    def test_two_component(self):
        state = ParticleState.massless_state(1.0, (0.6, 0.8, 0))
        phi1, phi2 = make_solutions(state)
        Phi11 = massless_weight("phi1", 1.0, state.direction, 0.4)
        Phi22 = massless_weight("phi2", 1.0, state.direction, 0.4)
        assert two_component_check(Phi11, Phi22, phi1, phi2) <= 1e-12

    def test_two_component_trivial(self):
        phi = PhaseForm(0.3, (1, 2, 0))
        assert two_component_check(PhaseForm(), PhaseForm(), phi, phi) == 0

    @given(st.tuples(*[st.floats(-3, 3)] * 4), st.tuples(*[st.floats(-3, 3)] * 4))
    def test_two_component_random(self, a, b):
        p1, p2 = PhaseForm(a[0], a[1:]), PhaseForm(b[0], b[1:])
        assert two_component_check(p2, p1, p1, p2) <= 1e-9


class TestLimits:
    def test_phi1_small(self):
        assert nonrel_limit_gap("phi1", 1e-3) <= 1e-5

    @pytest.mark.parametrize("quantity", ["phi1", "phi2"])
    def test_quadratic_order(self, quantity):
        g1, g2 = nonrel_limit_gap(quantity, 0.02), nonrel_limit_gap(quantity, 0.01)
        assert g1 / g2 >= 3.5

    def test_Phi2_sample(self):
        assert nonrel_limit_gap("Phi2", 1e-2) <= 1e-2

    def test_Phi2_gap_shrinks(self):
        assert nonrel_limit_gap("Phi2", 1e-3) < nonrel_limit_gap("Phi2", 1e-2)

    def test_domain(self):
        with pytest.raises(ValueError):
            nonrel_limit_gap("phi1", 0.2)
        with pytest.raises(ValueError):
            nonrel_limit_gap("phi1", 0.0)


class TestRotation:
    @given(unit)
    def test_aligns_to_x(self, u):
        R = rotation_aligning(u)
        np.testing.assert_allclose(R @ (np.array(u) / np.linalg.norm(u)), [1, 0, 0], atol=1e-12)
        np.testing.assert_allclose(R @ R.T, np.eye(3), atol=1e-12)

    def test_rotated_wave_still_solves(self):
        state = massive(0.4, (0.2, 0.3, 0.9))
        binding = OperatorBinding("relativistic", state=state)
        phi = rotate_phase(solution("phi2", state), rotation_aligning(state.v))
        assert abs(dispersion_residual(binding, phi)) <= 1e-12
        assert phi.kappa[1] == pytest.approx(0, abs=1e-12)

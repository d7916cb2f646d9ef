"""Plane waves, boosts and weight functions for the (relativistic) Schroedinger equation.

Every field here is a phase form ``exp[i(kappa.x - sigma t)]``, so products and
quotients reduce to adding exponents and a linear operator acts through its
symbol.  Arithmetic stays generic over the number type: feed ``Fraction``
inputs to the Galilei routines and the results are exact.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from numbers import Rational
from typing import Optional, Sequence, Tuple

import numpy as np

Vec3 = Tuple[float, float, float]

FAMILIES = ("schrodinger", "phi1", "phi2")
SQRT2 = math.sqrt(2.0)


class KinematicsUndefined(ValueError):
    pass


class ZeroVelocity(KinematicsUndefined):
    pass


def _vec(v) -> Vec3:
    v = tuple(v)
    if len(v) != 3:
        raise ValueError("expected a 3-vector")
    return v


def _div(a, b):
    # keep integer/rational inputs exact
    if isinstance(a, Rational) and isinstance(b, Rational):
        return Fraction(a) / b
    return a / b


def _dot(a, b):
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]


@dataclass(frozen=True)
class PhaseForm:
    """The field ``exp[i(kappa.x - sigma t)]``."""

    sigma: object = 0
    kappa: Vec3 = (0, 0, 0)

    def __post_init__(self):
        object.__setattr__(self, "kappa", _vec(self.kappa))
        if not all(cmath.isfinite(complex(c)) for c in (self.sigma, *self.kappa)):
            raise ValueError("phase form components must be finite")

    @classmethod
    def from_exponent(cls, hbar, energy, momentum) -> "PhaseForm":
        """The form ``exp[-(i/hbar)(energy t - momentum.x)]``."""
        return cls(_div(energy, hbar), tuple(_div(p, hbar) for p in momentum))

    def __mul__(self, other: "PhaseForm") -> "PhaseForm":
        return PhaseForm(self.sigma + other.sigma, tuple(a + b for a, b in zip(self.kappa, other.kappa)))

    def __truediv__(self, other: "PhaseForm") -> "PhaseForm":
        return PhaseForm(self.sigma - other.sigma, tuple(a - b for a, b in zip(self.kappa, other.kappa)))

    def __call__(self, t, x) -> complex:
        return cmath.exp(1j * (_dot(self.kappa, x) - self.sigma * t))

    @property
    def components(self) -> np.ndarray:
        return np.array([float(self.sigma), *map(float, self.kappa)])

    def phase_velocity(self) -> float:
        return float(self.sigma) / math.sqrt(float(_dot(self.kappa, self.kappa)))

    def distance(self, other: "PhaseForm") -> float:
        return float(np.linalg.norm(self.components - other.components))


@dataclass(frozen=True)
class ParticleState:
    """Massive particle ``(m0, v)`` or massless one ``(P, n)``; ``c`` is the light speed."""

    c: object = 1
    m0: object = 1
    v: Vec3 = (0, 0, 0)
    massless: bool = False
    momentum: object = 0
    direction: Vec3 = (1, 0, 0)

    def __post_init__(self):
        object.__setattr__(self, "v", _vec(self.v))
        object.__setattr__(self, "direction", _vec(self.direction))
        if self.c <= 0:
            raise ValueError("c must be positive")
        if self.massless:
            if self.momentum < 0:
                raise ValueError("momentum magnitude must be nonnegative")
        elif self.m0 <= 0:
            raise ValueError("rest mass must be positive")

    @classmethod
    def massive(cls, m0, v, c=1) -> "ParticleState":
        st = cls(c=c, m0=m0, v=v)
        if _dot(st.v, st.v) >= c * c:
            raise ValueError("massive states need |v| < c")
        return st

    @classmethod
    def massless_state(cls, momentum, direction, c=1) -> "ParticleState":
        n = np.asarray(direction, dtype=float)
        n = n / np.linalg.norm(n)
        return cls(c=c, massless=True, momentum=momentum, direction=tuple(n))

    @cached_property
    def speed(self):
        return self.c if self.massless else math.sqrt(_dot(self.v, self.v))

    @cached_property
    def beta(self):
        return 1.0 if self.massless else self.speed / self.c

    @cached_property
    def gamma(self) -> float:
        if self.massless:
            return math.inf
        return 1.0 / math.sqrt(1.0 - float(_dot(self.v, self.v)) / float(self.c) ** 2)

    @cached_property
    def mass(self):
        return self.m0 * self.gamma

    @cached_property
    def W(self):
        if self.massless:
            return self.c * self.momentum
        return self.mass * self.c ** 2

    @cached_property
    def P(self) -> Vec3:
        if self.massless:
            return tuple(self.momentum * n for n in self.direction)
        return tuple(self.mass * vi for vi in self.v)

    @cached_property
    def n(self) -> Vec3:
        if self.massless:
            return self.direction
        if not self.speed:
            raise ZeroVelocity("direction of a particle at rest is undefined")
        return tuple(vi / self.speed for vi in self.v)


@dataclass(frozen=True)
class BoostSpec:
    kind: str
    V: object = 0
    c: object = 1

    def __post_init__(self):
        if self.kind not in ("galilei", "lorentz"):
            raise ValueError(f"unknown boost kind {self.kind!r}")
        if self.kind == "lorentz" and abs(self.V) >= self.c:
            raise ValueError("lorentz boosts need |V| < c")

    @property
    def gamma(self) -> float:
        return 1.0 / math.sqrt(1.0 - float(self.V) ** 2 / float(self.c) ** 2)


@dataclass(frozen=True)
class OperatorBinding:
    """Numeric operator: schrodinger | relativistic | massless | dalembert."""

    operator: str = "schrodinger"
    hbar: object = 1
    m0: object = 1
    c: object = 1
    state: Optional[ParticleState] = None
    w: Optional[float] = None

    def __post_init__(self):
        if self.operator not in ("schrodinger", "relativistic", "massless", "dalembert"):
            raise ValueError(f"unknown operator {self.operator!r}")
        if self.hbar <= 0 or self.c <= 0 or self.m0 <= 0:
            raise ValueError("hbar, c and m0 must be positive")
        if self.operator in ("relativistic", "massless") and self.state is None:
            raise ValueError(f"{self.operator} binding needs a particle state for W")

    @property
    def W(self):
        return self.state.W


def dispersion_residual(binding: OperatorBinding, wave: PhaseForm):
    """Scalar ``r`` with ``L wave = r wave``."""
    s, k2 = wave.sigma, _dot(wave.kappa, wave.kappa)
    h = binding.hbar
    if binding.operator == "schrodinger":
        return h * s - h * h * k2 / (2 * binding.m0)
    if binding.operator == "dalembert":
        w = binding.w if binding.w is not None else binding.c
        return -s * s / w ** 2 + k2
    return h * s - binding.c ** 2 * h * h * k2 / (2 * binding.W)


def solution(family: str, state: ParticleState, hbar=1) -> PhaseForm:
    """Plane-wave member of ``family`` for ``state``."""
    if family == "schrodinger":
        m = state.m0
        return PhaseForm.from_exponent(hbar, m * _dot(state.v, state.v) / 2, tuple(m * vi for vi in state.v))
    if family == "phi1":
        return PhaseForm.from_exponent(hbar, state.beta ** 2 * state.W / 2, state.P)
    if family == "phi2":
        if not state.beta:
            raise ZeroVelocity("phi2 needs a moving particle")
        return PhaseForm.from_exponent(hbar, state.W, tuple(SQRT2 / state.beta * p for p in state.P))
    raise ValueError(f"unknown solution family {family!r}")


def make_solutions(state: ParticleState, binding: OperatorBinding = None) -> Tuple[PhaseForm, PhaseForm]:
    hbar = binding.hbar if binding else 1
    return solution("phi1", state, hbar), solution("phi2", state, hbar)


def boost_coordinates(spec: BoostSpec, event):
    t, x, y, z = event
    V, c = spec.V, spec.c
    if spec.kind == "galilei":
        return (t, x - V * t, y, z)
    g = spec.gamma
    return (g * (t - x * V / c ** 2), g * (x - V * t), y, z)


def boost_state(spec: BoostSpec, state: ParticleState) -> ParticleState:
    """The particle as seen from the moving frame."""
    V = spec.V
    if spec.kind == "galilei":
        if state.massless:
            raise KinematicsUndefined("galilei boosts of massless states are undefined")
        vx, vy, vz = state.v
        return ParticleState(c=state.c, m0=state.m0, v=(vx - V, vy, vz))
    g, c = spec.gamma, spec.c
    W, (px, py, pz) = state.W, state.P
    W2 = g * (W - V * px)
    P2 = (g * (px - V * W / c ** 2), py, pz)
    if state.massless:
        mag = math.sqrt(_dot(P2, P2))
        return ParticleState(c=c, massless=True, momentum=mag, direction=tuple(p / mag for p in P2))
    return ParticleState(c=c, m0=state.m0, v=tuple(p * c ** 2 / W2 for p in P2))


def pullback(wave: PhaseForm, spec: BoostSpec) -> PhaseForm:
    """``wave(x'(x))`` as a phase form in the unprimed coordinates."""
    s, (kx, ky, kz) = wave.sigma, wave.kappa
    V = spec.V
    if spec.kind == "galilei":
        return PhaseForm(s + V * kx, (kx, ky, kz))
    g, c = spec.gamma, spec.c
    return PhaseForm(g * (s + V * kx), (g * (kx + s * V / c ** 2), ky, kz))


def weight_function(family: str, spec: BoostSpec, state: ParticleState, hbar=1) -> PhaseForm:
    """``Phi = phi'(x' -> x) / phi(x)`` for the boosted member of ``family``."""
    if spec.kind == "lorentz" and spec.c != state.c:
        raise ValueError("boost and state disagree on c")
    phi = solution(family, state, hbar)
    moved = boost_state(spec, state)
    if family == "phi2" and not moved.beta:
        raise KinematicsUndefined("boosted particle is at rest; phi2' is undefined")
    return pullback(solution(family, moved, hbar), spec) / phi


def boosted_beta_sq(state: ParticleState, V, c=1) -> float:
    """Closed-form velocity composition for beta'^2 along an x boost."""
    b2 = state.beta ** 2
    bx = state.v[0] / c
    return (V ** 2 * (1 - b2) / c ** 2 + b2 - 2 * V * bx / c + V ** 2 * bx ** 2 / c ** 2) / (1 - V * bx / c) ** 2


# --- printed closed forms ---------------------------------------------------

def galilei_weight(m, V, hbar=1) -> PhaseForm:
    """``exp[-(i/hbar)(-E t + x P)]`` with ``E = m V^2/2``, ``P = m V``."""
    return PhaseForm.from_exponent(hbar, -m * V ** 2 / 2, (-m * V, 0, 0))


def lorentz_weight_phi1(state: ParticleState, V, hbar=1) -> PhaseForm:
    c = state.c
    bp2 = boosted_beta_sq(state, V, c) if not state.massless else 1.0
    W, Px = state.W, state.P[0]
    s = 1 - V ** 2 / c ** 2
    a_t = ((bp2 - 2 * V ** 2 / c ** 2 - state.beta ** 2 * s) * W - V * (bp2 - 2) * Px) / (2 * s)
    b_x = -(bp2 - 2) * (V * W / c ** 2 - V ** 2 * Px / c ** 2) / (2 * s)
    return PhaseForm.from_exponent(hbar, a_t, (-b_x, 0, 0))


def lorentz_weight_phi2(state: ParticleState, V, hbar=1) -> PhaseForm:
    c = state.c
    beta = state.beta
    bp = math.sqrt(boosted_beta_sq(state, V, c))
    W, (Px, Py, Pz) = state.W, state.P
    s = 1 - V ** 2 / c ** 2
    f = 1 - SQRT2 / bp
    g = SQRT2 * (1 / beta - 1 / bp)
    a_t = f * (V ** 2 * W / c ** 2 - V * Px) / s
    b_x = ((V ** 2 / c ** 2 * f + g) * Px - f * W * V / c ** 2) / s
    return PhaseForm.from_exponent(hbar, a_t, (-b_x, -g * Py, -g * Pz))


def massless_weight(family: str, momentum, direction, V, c=1, hbar=1) -> PhaseForm:
    factor = {"phi1": 0.5, "phi2": SQRT2 - 1}[family]
    nx = direction[0]
    pre = factor * V * momentum / (1 - V ** 2 / c ** 2)
    return PhaseForm.from_exponent(hbar, pre * (nx - V / c), (-pre * (1 - nx * V / c) / c, 0, 0))


def nonrel_phi1(m0, v: Vec3, hbar=1) -> PhaseForm:
    return PhaseForm.from_exponent(hbar, m0 * _dot(v, v) / 2, tuple(m0 * vi for vi in v))


def nonrel_phi2(m0, v: Vec3, c=1, hbar=1) -> PhaseForm:
    speed = math.sqrt(_dot(v, v))
    return PhaseForm.from_exponent(hbar, m0 * c ** 2, tuple(SQRT2 * m0 * c * vi / speed for vi in v))


def nonrel_weight_phi2(m0, v: Vec3, V, c=1, hbar=1) -> PhaseForm:
    vx = v[0]
    speed = math.sqrt(_dot(v, v))
    vp = math.sqrt(speed ** 2 - 2 * V * vx + V ** 2)
    n = tuple(vi / speed for vi in v)
    lead = SQRT2 * m0 * c / vp
    kx = (n[0] * (speed - vp) - V)
    return PhaseForm.from_exponent(
        hbar, lead * V * (vx - V),
        (lead * kx, lead * n[1] * (speed - vp), lead * n[2] * (speed - vp)),
    )


# --- checks -----------------------------------------------------------------

def weight_set_residual(wave: PhaseForm, spec: BoostSpec, binding: OperatorBinding):
    """Symbol of the transformed operator on ``wave`` (the product ``Phi phi``)."""
    h, V = binding.hbar, spec.V
    s, (kx, ky, kz) = wave.sigma, wave.kappa
    if spec.kind == "galilei":
        k2 = kx * kx + ky * ky + kz * kz
        return h * s - h * h * k2 / (2 * binding.m0) - h * V * kx
    c = binding.c
    W, Px = binding.W, binding.state.P[0]
    s2 = 1 - V ** 2 / c ** 2
    lap = (kx - V * s / c ** 2) ** 2 / s2 + ky * ky + kz * kz
    return h * s - h * V * kx - c ** 2 * h * h * s2 / (2 * (W - V * Px)) * lap


def verify_weight_set(Phi: PhaseForm, phi: PhaseForm, spec: BoostSpec, binding: OperatorBinding):
    return weight_set_residual(Phi * phi, spec, binding)


def nonrel_limit_gap(quantity: str, beta: float, V_ratio: float = 0.5,
                     direction: Sequence[float] = (0.6, 0.8, 0.0), m0=1.0, c=1.0, hbar=1.0) -> float:
    """Relative distance between an exact phase form and its printed small-beta limit.

    For ``Phi2`` the leading terms cancel when v is parallel to the boost, and
    the printed limit then misses an ``m0 V`` term; use a skew ``direction``.
    """
    if not 0 < beta <= 0.1:
        raise ValueError("need 0 < beta <= 0.1")
    n = np.asarray(direction, dtype=float)
    v = tuple(beta * c * n / np.linalg.norm(n))
    state = ParticleState.massive(m0, v, c)
    if quantity == "phi1":
        exact, limit = solution("phi1", state, hbar), nonrel_phi1(m0, v, hbar)
    elif quantity == "phi2":
        exact, limit = solution("phi2", state, hbar), nonrel_phi2(m0, v, c, hbar)
    elif quantity == "Phi2":
        V = V_ratio * beta * c
        exact = weight_function("phi2", BoostSpec("lorentz", V, c), state, hbar)
        limit = nonrel_weight_phi2(m0, v, V, c, hbar)
    else:
        raise ValueError(f"unknown quantity {quantity!r}")
    return exact.distance(limit) / float(np.linalg.norm(limit.components))


def two_component_check(Phi11: PhaseForm, Phi22: PhaseForm, phi1: PhaseForm, phi2: PhaseForm,
                        events: Sequence = None) -> float:
    """Max deviation between the diagonal law and its half-weighted full-matrix form."""
    if events is None:
        rng = np.random.default_rng(0)
        events = rng.uniform(-2, 2, size=(16, 4))
    Phi12 = Phi11 * phi1 / phi2
    Phi21 = Phi22 * phi2 / phi1
    worst = 0.0
    for t, *x in events:
        f1, f2 = phi1(t, x), phi2(t, x)
        diag = (Phi11(t, x) * f1, Phi22(t, x) * f2)
        full = (0.5 * (Phi11(t, x) * f1 + Phi12(t, x) * f2), 0.5 * (Phi21(t, x) * f1 + Phi22(t, x) * f2))
        worst = max(worst, abs(diag[0] - full[0]), abs(diag[1] - full[1]))
    return worst


def rotation_aligning(u: Sequence[float]) -> np.ndarray:
    """Orthogonal matrix taking the unit vector along ``u`` to the x axis."""
    u = np.asarray(u, dtype=float)
    u = u / np.linalg.norm(u)
    e = np.array([1.0, 0.0, 0.0])
    w = np.cross(u, e)
    s, cth = np.linalg.norm(w), float(u @ e)
    if s < 1e-15:
        return np.eye(3) if cth > 0 else np.diag([-1.0, -1.0, 1.0])
    K = np.array([[0, -w[2], w[1]], [w[2], 0, -w[0]], [-w[1], w[0], 0]]) / s
    return np.eye(3) + s * K + (1 - cth) * K @ K


def rotate_phase(wave: PhaseForm, R: np.ndarray) -> PhaseForm:
    return PhaseForm(wave.sigma, tuple(np.asarray(R) @ np.asarray(wave.kappa, dtype=float)))


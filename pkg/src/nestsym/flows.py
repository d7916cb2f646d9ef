"""One-parameter coordinate flows ``dx'/dtheta = xi(x')`` of solved generators.

Closed forms exist for affine fields and for the two quadratic fields
``2 t^2 d_t + t x^k d_k`` and ``t (x^j d_k - x^k d_j)``; a fixed-step RK4
integrator serves as an independent check on all of them.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Mapping, Optional, Sequence

import numpy as np

from .algebra import CoordPolynomial
from .algebra.polynomials import NDIM
from .diffop import NO_DERIV, DiffOp

_TAYLOR_TERMS = 13


class SingularFlow(ValueError):
    """The closed-form flow leaves its domain (1 - 2 theta t <= 0)."""


class BadIndices(ValueError):
    pass


def _real_value(s, values, what):
    z = s.evaluate(values)
    if abs(z.imag) > 1e-14 * max(1.0, abs(z.real)):
        raise ValueError(f"{what} has a non-real value {z}")
    return z.real


@dataclass(frozen=True)
class AffineGenerator:
    """Vector field ``xi(x) = A x + a``."""

    A: np.ndarray
    a: np.ndarray

    def __post_init__(self):
        A = np.asarray(self.A, dtype=float).reshape(NDIM, NDIM)
        a = np.asarray(self.a, dtype=float).reshape(NDIM)
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "a", a)

    @classmethod
    def from_diffop(cls, op: DiffOp, values: Mapping[str, float] = None) -> "AffineGenerator":
        values = values or {}
        xi, eta = op.vector_field()
        if eta:
            raise ValueError("flows of generators with a multiplicative part are not supported")
        A = np.zeros((NDIM, NDIM))
        a = np.zeros(NDIM)
        for row, poly in enumerate(xi):
            if poly.degree > 1:
                raise ValueError("generator is not affine")
            for mono, s in poly.items():
                v = _real_value(s, values, "coefficient")
                if sum(mono) == 0:
                    a[row] = v
                else:
                    A[row, mono.index(1)] = v
        return cls(A, a)

    def __call__(self, x):
        return self.A @ np.asarray(x, dtype=float) + self.a


def _is_nilpotent(N: np.ndarray) -> bool:
    P = np.eye(N.shape[0])
    for _ in range(N.shape[0]):
        P = P @ N
    return not np.any(P)


def expm(M: np.ndarray) -> np.ndarray:
    """Matrix exponential: finite series when nilpotent, else scaling and squaring."""
    M = np.asarray(M, dtype=float)
    n = M.shape[0]
    if _is_nilpotent(M):
        out = np.eye(n)
        term = np.eye(n)
        for k in range(1, n):
            term = term @ M / k
            out = out + term
        return out
    norm = np.linalg.norm(M, 1)
    s = max(0, math.ceil(math.log2(norm / 0.5))) if norm > 0.5 else 0
    X = M / 2 ** s
    out = np.eye(n)
    term = np.eye(n)
    for k in range(1, _TAYLOR_TERMS + 1):
        term = term @ X / k
        out = out + term
    for _ in range(s):
        out = out @ out
    return out


def flow_affine(gen: AffineGenerator, theta: float, x) -> np.ndarray:
    """``exp(theta A) x + T(theta) a`` via the augmented 5x5 exponential."""
    aug = np.zeros((NDIM + 1, NDIM + 1))
    aug[:NDIM, :NDIM] = gen.A
    aug[:NDIM, NDIM] = gen.a
    E = expm(theta * aug)
    return E[:NDIM, :NDIM] @ np.asarray(x, dtype=float) + E[:NDIM, NDIM]


def flow_q1(theta: float, x) -> np.ndarray:
    t, *space = (float(v) for v in x)
    den = 1.0 - 2.0 * theta * t
    if den <= 0:
        raise SingularFlow(f"1 - 2*theta*t = {den} <= 0")
    return np.array([t / den] + [s / math.sqrt(den) for s in space])


def flow_rotation(theta: float, j: int, k: int, x) -> np.ndarray:
    if j == k or j not in (1, 2, 3) or k not in (1, 2, 3):
        raise BadIndices(f"need distinct spatial indices, got {j}, {k}")
    out = np.array(x, dtype=float)
    phase = theta * out[0]
    cs, sn = math.cos(phase), math.sin(phase)
    xj, xk = out[j], out[k]
    out[j] = xj * cs - xk * sn
    out[k] = xj * sn + xk * cs
    return out


class PolynomialField:
    """Numerically bound polynomial vector field on R^4."""

    def __init__(self, components: Sequence[CoordPolynomial], values: Mapping[str, float] = None):
        values = values or {}
        if len(components) != NDIM:
            raise ValueError("need one polynomial per coordinate")
        self._terms = []
        for poly in components:
            self._terms.append(
                [(_real_value(s, values, "field coefficient"), np.array(m)) for m, s in poly.items()]
            )

    @classmethod
    def from_diffop(cls, op: DiffOp, values: Mapping[str, float] = None) -> "PolynomialField":
        xi, eta = op.vector_field()
        if eta:
            raise ValueError("flows of generators with a multiplicative part are not supported")
        return cls(xi, values)

    def __call__(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        return np.array([sum(c * np.prod(x ** m) for c, m in terms) for terms in self._terms])


@dataclass(frozen=True)
class NumericIntegratorConfig:
    step: Optional[float] = None
    method: str = "rk4"

    def step_for(self, theta: float) -> float:
        if self.method != "rk4":
            raise ValueError(f"unsupported integrator {self.method!r}")
        if theta == 0:
            return 0.0
        h = self.step if self.step is not None else 1e-3 * abs(theta)
        if h <= 0:
            raise ValueError("step must be positive")
        if h > abs(theta) / 10:
            raise ValueError("step must not exceed theta/10")
        return h


def integrate_numeric(field: Callable, x, theta: float, cfg: NumericIntegratorConfig = None) -> np.ndarray:
    """RK4 endpoint of ``dx/dtheta = field(x)`` from ``x`` over ``[0, theta]``."""
    cfg = cfg or NumericIntegratorConfig()
    y = np.array(x, dtype=float)
    h = cfg.step_for(theta)
    if h == 0.0:
        return y
    n = math.ceil(abs(theta) / h - 1e-12)
    h = theta / n
    for _ in range(n):
        k1 = field(y)
        k2 = field(y + 0.5 * h * k1)
        k3 = field(y + 0.5 * h * k2)
        k4 = field(y + h * k3)
        y = y + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
    return y


@dataclass(frozen=True)
class FlowMap:
    kind: str
    theta: float
    evaluation: Callable

    def __call__(self, x) -> np.ndarray:
        return self.evaluation(x)


def flow_map(op: DiffOp, theta: float, values: Mapping[str, float] = None,
             method: str = "closed", cfg: NumericIntegratorConfig = None) -> FlowMap:
    """Pick the closed form matching ``op`` (or RK4 when ``method='rk4'``)."""
    from . import catalog

    values = values or {}
    if method == "rk4":
        field = PolynomialField.from_diffop(op, values)
        return FlowMap("numeric", theta, lambda x: integrate_numeric(field, x, theta, cfg))
    if method != "closed":
        raise ValueError(f"unknown flow method {method!r}")
    if op == catalog.Q1():
        return FlowMap("q1_special", theta, lambda x: flow_q1(theta, x))
    for j in (1, 2, 3):
        for k in (1, 2, 3):
            if j != k and op == catalog.Qrot(j, k):
                return FlowMap("rotation_special", theta, lambda x, j=j, k=k: flow_rotation(theta, j, k, x))
    if op.order <= 1 and op.coordinate_degree <= 1 and not op.coefficient(NO_DERIV):
        gen = AffineGenerator.from_diffop(op, values)
        return FlowMap("affine", theta, lambda x: flow_affine(gen, theta, x))
    raise ValueError("no closed-form flow for this generator; use method='rk4'")

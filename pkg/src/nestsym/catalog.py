"""Named operators: wave operators and the symmetry generators built on them.

Coordinates are x0 = t, (x1, x2, x3) = (x, y, z); every monomial uses the
upper-index coordinates, so ``G(a, b) = x^a d_b`` with no metric signs.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Callable, Dict, List, Sequence

from .algebra import I, CoordPolynomial, ParamScalar, coordinate
from .diffop import DiffOp

SPATIAL = (1, 2, 3)
INDEX_NAMES = "txyz"

hbar = ParamScalar.symbol("hbar")
mass = ParamScalar.symbol("m")
c = ParamScalar.symbol("c")
W = ParamScalar.symbol("W")
i_ = ParamScalar.const(I)


def d(a: int, b: int = None) -> DiffOp:
    return DiffOp.partial(a, b)


def x(a: int) -> DiffOp:
    return DiffOp.multiplication(coordinate(a))


def laplacian() -> DiffOp:
    return d(1, 1) + d(2, 2) + d(3, 3)


def schrodinger() -> DiffOp:
    """Free Schroedinger operator ``i hbar d_t + hbar^2/(2m) Laplacian``."""
    return d(0).scale(i_ * hbar) + laplacian().scale(hbar ** 2 * mass ** -1 * Fraction(1, 2))


def relativistic_schrodinger() -> DiffOp:
    """``i hbar d_t + c^2 hbar^2/(2W) Laplacian`` with W kept symbolic."""
    return d(0).scale(i_ * hbar) + laplacian().scale(c ** 2 * hbar ** 2 * W ** -1 * Fraction(1, 2))


def dalembert() -> DiffOp:
    """``(1/c^2) d_tt - Laplacian``."""
    return d(0, 0).scale(c ** -2) - laplacian()


# --- Schroedinger algebra, p = 1 ------------------------------------------

def p0() -> DiffOp:
    return d(0).scale(i_)


def p(k: int) -> DiffOp:
    return d(k).scale(-i_)


def J(k: int) -> DiffOp:
    """Rotation ``(x cross p)_k``."""
    a, b = [j for j in SPATIAL if j != k]
    sign = 1 if (k, a, b) in ((1, 2, 3), (2, 3, 1), (3, 1, 2)) else -1
    if sign < 0:
        a, b = b, a
    return x(a) * p(b) - x(b) * p(a)


def M() -> DiffOp:
    """Central element: multiplication by m/hbar."""
    return DiffOp.multiplication(mass * hbar ** -1)


def H(k: int) -> DiffOp:
    """Galilei boost ``i t d_k + (m/hbar) x^k``."""
    return x(0) * d(k).scale(i_) + DiffOp.multiplication(coordinate(k).scale(mass * hbar ** -1))


def D() -> DiffOp:
    """Dilation ``2 t p0 - x.p + 3i/2``."""
    out = (x(0) * p0()).scale(2) + DiffOp.multiplication(ParamScalar.const(I * Fraction(3, 2)))
    for k in SPATIAL:
        out = out - x(k) * p(k)
    return out


def K() -> DiffOp:
    """Conformal generator ``t^2 p0 - t D - (m/hbar) |x|^2 / 2``."""
    r2 = sum((coordinate(k) ** 2 for k in SPATIAL), CoordPolynomial())
    return x(0) * x(0) * p0() - x(0) * D() - DiffOp.multiplication(r2.scale(mass * hbar ** -1 * Fraction(1, 2)))


def sch13() -> Dict[str, DiffOp]:
    ops = {"p0": p0()}
    ops.update({f"p{k}": p(k) for k in SPATIAL})
    ops.update({f"J{k}": J(k) for k in SPATIAL})
    ops.update({f"H{k}": H(k) for k in SPATIAL})
    ops.update({"M": M(), "D": D(), "K": K()})
    return ops


# --- affine algebra, p = 2 --------------------------------------------------

def P(a: int) -> DiffOp:
    return d(a)


def G(a: int, b: int) -> DiffOp:
    return x(a) * d(b)


def igl20() -> Dict[str, DiffOp]:
    ops = {f"P{a}": P(a) for a in range(4)}
    ops.update({f"G{a}{b}": G(a, b) for a in range(4) for b in range(4)})
    return ops


def lorentz_boost(k: int) -> DiffOp:
    """``c t d_k + (x^k / c) d_t``."""
    return (x(0) * d(k)).scale(c) + (x(k) * d(0)).scale(c ** -1)


def Q1() -> DiffOp:
    """``2 t^2 d_t + t x^k d_k``."""
    out = (x(0) * x(0) * d(0)).scale(2)
    for k in SPATIAL:
        out = out + x(0) * x(k) * d(k)
    return out


def Qrot(j: int, k: int) -> DiffOp:
    """Time-dependent rotation ``t (x^j d_k - x^k d_j)``."""
    return x(0) * (x(j) * d(k) - x(k) * d(j))


def monomial_field(indices: Sequence[int], target: int) -> DiffOp:
    """``x^{a1} ... x^{as} d_target``."""
    poly = CoordPolynomial.const(1)
    for a in indices:
        poly = poly * coordinate(a)
    return DiffOp.multiplication(poly) * d(target)


def _named() -> Dict[str, Callable[[], DiffOp]]:
    table: Dict[str, Callable[[], DiffOp]] = {
        "Ls": schrodinger,
        "L_s": schrodinger,
        "schrodinger": schrodinger,
        "Lr": relativistic_schrodinger,
        "relativistic": relativistic_schrodinger,
        "box": dalembert,
        "dalembert": dalembert,
        "Q1": Q1,
        "M": M,
        "D": D,
        "K": K,
        "p0": p0,
    }
    for k in SPATIAL:
        table[f"p{k}"] = lambda k=k: p(k)
        table[f"J{k}"] = lambda k=k: J(k)
        table[f"H{k}"] = lambda k=k: H(k)
        table[f"M0{k}"] = lambda k=k: lorentz_boost(k)
    for a in range(4):
        table[f"P{a}"] = lambda a=a: P(a)
        for b in range(4):
            table[f"G{a}{b}"] = lambda a=a, b=b: G(a, b)
    for j in SPATIAL:
        for k in SPATIAL:
            if j != k:
                table[f"Q{j}{k}"] = lambda j=j, k=k: Qrot(j, k)
    return table


NAMED = _named()


def lookup(name: str) -> DiffOp:
    try:
        return NAMED[name]()
    except KeyError:
        raise KeyError(f"no catalog operator named {name!r}") from None


def names() -> List[str]:
    return sorted(NAMED)

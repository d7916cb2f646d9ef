"""Polynomials in the space-time coordinates x0=t, x1=x, x2=y, x3=z."""
from __future__ import annotations

from fractions import Fraction
from math import prod
from typing import Iterable, Mapping, Tuple

from .scalars import GaussianRational, ParamScalar, ZERO

NDIM = 4
COORD_NAMES = ("t", "x", "y", "z")

CoordMonomial = Tuple[int, int, int, int]
UNIT: CoordMonomial = (0, 0, 0, 0)


def coord_monomial(*exps: int) -> CoordMonomial:
    exps = tuple(int(e) for e in exps) + (0,) * (NDIM - len(exps))
    if len(exps) != NDIM or any(e < 0 for e in exps):
        raise ValueError(f"bad coordinate exponents {exps}")
    return exps


def monomial_degree(mono: CoordMonomial) -> int:
    return sum(mono)


def monomials_up_to(degree: int, min_degree: int = 0):
    """All coordinate monomials with min_degree <= total degree <= degree, graded order."""
    out = []
    for d in range(min_degree, degree + 1):
        out.extend(_monomials_of_degree(d, NDIM))
    return out


def _monomials_of_degree(d: int, n: int):
    if n == 1:
        return [(d,)]
    res = []
    for first in range(d, -1, -1):
        for rest in _monomials_of_degree(d - first, n - 1):
            res.append((first,) + rest)
    return res


def format_coord_monomial(mono: CoordMonomial) -> str:
    parts = []
    for name, e in zip(COORD_NAMES, mono):
        if e == 1:
            parts.append(name)
        elif e > 1:
            parts.append(f"{name}^{e}")
    return "*".join(parts)


class CoordPolynomial:
    """Zero-free map ``{CoordMonomial: ParamScalar}``; structural equality."""

    __slots__ = ("_d", "_hash")

    def __init__(self, terms=None):
        d: dict = {}
        if terms:
            items = terms.items() if isinstance(terms, Mapping) else terms
            for mono, coef in items:
                mono = coord_monomial(*mono)
                coef = ParamScalar.coerce(coef)
                if mono in d:
                    coef = d[mono] + coef
                if coef:
                    d[mono] = coef
                else:
                    d.pop(mono, None)
        self._d = d
        self._hash = None

    @classmethod
    def _from_dict(cls, d):
        p = cls.__new__(cls)
        p._d = d
        p._hash = None
        return p

    @classmethod
    def const(cls, value) -> "CoordPolynomial":
        s = ParamScalar.coerce(value)
        return cls._from_dict({UNIT: s} if s else {})

    @classmethod
    def coordinate(cls, index: int, power: int = 1) -> "CoordPolynomial":
        mono = [0] * NDIM
        mono[index] = power
        return cls._from_dict({tuple(mono): ParamScalar.const(1)})

    @classmethod
    def coerce(cls, value) -> "CoordPolynomial":
        if isinstance(value, CoordPolynomial):
            return value
        return cls.const(value)

    @property
    def terms(self):
        return tuple(sorted(self._d.items()))

    def items(self):
        return self._d.items()

    def get(self, mono, default=ZERO) -> ParamScalar:
        return self._d.get(mono, default)

    def __bool__(self):
        return bool(self._d)

    def __len__(self):
        return len(self._d)

    def __eq__(self, other):
        if not isinstance(other, CoordPolynomial):
            try:
                other = CoordPolynomial.const(other)
            except (TypeError, ValueError):
                return NotImplemented
        return self._d == other._d

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._d.items()))
        return self._hash

    @property
    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(m) for m in self._d), default=-1)

    def is_constant(self) -> bool:
        return all(m == UNIT for m in self._d)

    def constant_term(self) -> ParamScalar:
        return self._d.get(UNIT, ZERO)

    def __add__(self, other):
        other = CoordPolynomial.coerce(other)
        if not other._d:
            return self
        if not self._d:
            return other
        d = dict(self._d)
        for k, v in other._d.items():
            if k in d:
                s = d[k] + v
                if s:
                    d[k] = s
                else:
                    del d[k]
            else:
                d[k] = v
        return CoordPolynomial._from_dict(d)

    __radd__ = __add__

    def __neg__(self):
        return CoordPolynomial._from_dict({k: -v for k, v in self._d.items()})

    def __sub__(self, other):
        return self + (-CoordPolynomial.coerce(other))

    def __rsub__(self, other):
        return CoordPolynomial.coerce(other) - self

    def scale(self, s: ParamScalar) -> "CoordPolynomial":
        s = ParamScalar.coerce(s)
        if not s:
            return CoordPolynomial()
        d = {}
        for k, v in self._d.items():
            w = v * s
            if w:
                d[k] = w
        return CoordPolynomial._from_dict(d)

    def __mul__(self, other):
        if not isinstance(other, CoordPolynomial):
            if not isinstance(other, (ParamScalar, int, Fraction, complex, GaussianRational)):
                return NotImplemented
            return self.scale(other)
        if not self._d or not other._d:
            return CoordPolynomial()
        d: dict = {}
        for m1, c1 in self._d.items():
            for m2, c2 in other._d.items():
                m = (m1[0] + m2[0], m1[1] + m2[1], m1[2] + m2[2], m1[3] + m2[3])
                c = c1 * c2
                if m in d:
                    s = d[m] + c
                    if s:
                        d[m] = s
                    else:
                        del d[m]
                elif c:
                    d[m] = c
        return CoordPolynomial._from_dict(d)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        out = CoordPolynomial.const(1)
        for _ in range(n):
            out = out * self
        return out

    def derivative(self, multi_index) -> "CoordPolynomial":
        """Apply the partial derivative of the given multi-index."""
        if not any(multi_index):
            return self
        d = {}
        for mono, coef in self._d.items():
            if any(e < g for e, g in zip(mono, multi_index)):
                continue
            factor = prod(_falling(e, g) for e, g in zip(mono, multi_index))
            d[tuple(e - g for e, g in zip(mono, multi_index))] = coef * factor
        return CoordPolynomial._from_dict(d)

    def coefficient_symbols(self) -> set:
        out = set()
        for c in self._d.values():
            out |= c.symbols()
        return out

    def map_coefficients(self, fn) -> "CoordPolynomial":
        d = {}
        for k, v in self._d.items():
            w = fn(v)
            if w:
                d[k] = w
        return CoordPolynomial._from_dict(d)

    def evaluate(self, point: Iterable[float], values: Mapping[str, complex]) -> complex:
        point = tuple(point)
        total = 0j
        for mono, coef in self._d.items():
            total += coef.evaluate(values) * prod(p ** e for p, e in zip(point, mono))
        return total

    def __repr__(self):
        return f"CoordPolynomial({str(self)!r})"

    def __str__(self):
        if not self._d:
            return "0"
        parts = []
        for mono, coef in self.terms:
            cm = format_coord_monomial(mono)
            if not cm:
                parts.append(f"({coef})")
            else:
                parts.append(f"({coef})*{cm}")
        return " + ".join(parts)


def _falling(n: int, k: int) -> int:
    out = 1
    for j in range(k):
        out *= n - j
    return out


def coordinate(index: int) -> CoordPolynomial:
    return CoordPolynomial.coordinate(index)

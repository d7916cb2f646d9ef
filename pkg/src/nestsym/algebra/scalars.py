"""Exact scalars: Gaussian rationals and Laurent polynomials in named parameters.

Every operator coefficient in the package lives in the ring
``Q(i)[hbar, m, c, ..., hbar^-1, m^-1, ...]``.  Monomials in the parameters
are units of that ring, so division by a single term always succeeds; division
by a genuine polynomial succeeds only when it is exact.
"""
from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterable, Mapping, Union

PHYSICAL_PARAMETERS = ("hbar", "m", "m0", "c", "W", "V")
_UNKNOWN_RE = re.compile(r"^u\d+$")

Number = Union[int, Fraction]


class NotDivisible(ArithmeticError):
    """Raised when an exact quotient does not exist in the Laurent ring."""


def is_unknown_symbol(name: str) -> bool:
    return bool(_UNKNOWN_RE.match(name))


def check_parameter_name(name: str) -> str:
    if name in PHYSICAL_PARAMETERS or is_unknown_symbol(name):
        return name
    raise ValueError(f"parameter {name!r} is outside the declared universe")


def unknown_symbol(index: int) -> str:
    return f"u{index}"


class GaussianRational:
    """``re + im*i`` with arbitrary-precision rational parts."""

    __slots__ = ("re", "im")

    def __init__(self, re: Number = 0, im: Number = 0):
        object.__setattr__(self, "re", Fraction(re))
        object.__setattr__(self, "im", Fraction(im))

    def __setattr__(self, name, value):
        raise AttributeError("GaussianRational is immutable")

    @classmethod
    def coerce(cls, value) -> "GaussianRational":
        if isinstance(value, GaussianRational):
            return value
        if isinstance(value, complex):
            return cls(Fraction(value.real), Fraction(value.imag))
        return cls(value)

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.im == 0 and self.re == other
        if not isinstance(other, GaussianRational):
            return NotImplemented
        return self.re == other.re and self.im == other.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __add__(self, other):
        other = GaussianRational.coerce(other)
        return GaussianRational(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __sub__(self, other):
        return self + (-GaussianRational.coerce(other))

    def __rsub__(self, other):
        return GaussianRational.coerce(other) - self

    def __mul__(self, other):
        other = GaussianRational.coerce(other)
        return GaussianRational(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def conjugate(self):
        return GaussianRational(self.re, -self.im)

    def norm(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def inverse(self):
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("inverse of zero Gaussian rational")
        return GaussianRational(self.re / n, -self.im / n)

    def __truediv__(self, other):
        return self * GaussianRational.coerce(other).inverse()

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        return f"GaussianRational({self.re}, {self.im})"

    def __str__(self):
        if self.im == 0:
            return str(self.re)
        if self.re == 0:
            return "i" if self.im == 1 else f"{self.im}*i"
        return f"({self.re} + {self.im}*i)"


I = GaussianRational(0, 1)


class ParamMonomial(tuple):
    """Laurent monomial stored as sorted ``(name, exponent)`` pairs, no zeros."""

    __slots__ = ()

    def __new__(cls, exponents: Union[Mapping[str, int], Iterable] = ()):
        items = exponents.items() if isinstance(exponents, Mapping) else exponents
        merged: dict = {}
        for name, e in items:
            merged[name] = merged.get(name, 0) + int(e)
        pairs = tuple(sorted((check_parameter_name(k), e) for k, e in merged.items() if e))
        return tuple.__new__(cls, pairs)

    @classmethod
    def _raw(cls, pairs):
        return tuple.__new__(cls, pairs)

    @property
    def exponents(self) -> dict:
        return dict(self)

    def __mul__(self, other: "ParamMonomial") -> "ParamMonomial":
        if not self:
            return other
        if not other:
            return self
        d = dict(self)
        for k, e in other:
            s = d.get(k, 0) + e
            if s:
                d[k] = s
            else:
                del d[k]
        return ParamMonomial._raw(tuple(sorted(d.items())))

    def inverse(self) -> "ParamMonomial":
        return ParamMonomial._raw(tuple((k, -e) for k, e in self))

    def __truediv__(self, other):
        return self * other.inverse()

    def __pow__(self, n: int):
        if n == 0:
            return ONE_MONOMIAL
        return ParamMonomial._raw(tuple((k, e * n) for k, e in self))

    def degree_in(self, name: str) -> int:
        for k, e in self:
            if k == name:
                return e
        return 0

    def names(self):
        return [k for k, _ in self]

    def __repr__(self):
        return f"ParamMonomial({dict(self)!r})"

    def __str__(self):
        num = [k if e == 1 else f"{k}^{e}" for k, e in self if e > 0]
        den = [k if e == -1 else f"{k}^{-e}" for k, e in self if e < 0]
        s = "*".join(num) if num else "1"
        for d in den:
            s += "/" + d
        return s


ONE_MONOMIAL = ParamMonomial()


class ParamScalar:
    """Gaussian-rational combination of Laurent parameter monomials.

    Stored as a zero-free ``{ParamMonomial: GaussianRational}`` map, so equality
    is structural.  Iteration order (``terms``) is the sorted monomial order.
    """

    __slots__ = ("_d", "_hash")

    def __init__(self, terms=None):
        d: dict = {}
        if terms:
            items = terms.items() if isinstance(terms, Mapping) else terms
            for mono, coef in items:
                if not isinstance(mono, ParamMonomial):
                    mono = ParamMonomial(mono)
                coef = GaussianRational.coerce(coef)
                if mono in d:
                    coef = d[mono] + coef
                if coef:
                    d[mono] = coef
                else:
                    d.pop(mono, None)
        self._d = d
        self._hash = None

    @classmethod
    def _from_dict(cls, d: dict) -> "ParamScalar":
        s = cls.__new__(cls)
        s._d = d
        s._hash = None
        return s

    @classmethod
    def const(cls, value) -> "ParamScalar":
        g = GaussianRational.coerce(value)
        return cls._from_dict({ONE_MONOMIAL: g} if g else {})

    @classmethod
    def symbol(cls, name: str, power: int = 1) -> "ParamScalar":
        return cls._from_dict({ParamMonomial({name: power}): GaussianRational(1)})

    @classmethod
    def monomial(cls, coef, **powers) -> "ParamScalar":
        return cls({ParamMonomial(powers): coef})

    @classmethod
    def coerce(cls, value) -> "ParamScalar":
        if isinstance(value, ParamScalar):
            return value
        return cls.const(value)

    @property
    def terms(self):
        return tuple(sorted(self._d.items()))

    def items(self):
        return self._d.items()

    def __len__(self):
        return len(self._d)

    def __bool__(self):
        return bool(self._d)

    def is_zero(self) -> bool:
        return not self._d

    def __eq__(self, other):
        if not isinstance(other, ParamScalar):
            if isinstance(other, (int, Fraction, GaussianRational, complex)):
                other = ParamScalar.const(other)
            else:
                return NotImplemented
        return self._d == other._d

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._d.items()))
        return self._hash

    def __add__(self, other):
        other = ParamScalar.coerce(other)
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
        return ParamScalar._from_dict(d)

    __radd__ = __add__

    def __neg__(self):
        return ParamScalar._from_dict({k: -v for k, v in self._d.items()})

    def __sub__(self, other):
        return self + (-ParamScalar.coerce(other))

    def __rsub__(self, other):
        return ParamScalar.coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, ParamScalar):
            if not isinstance(other, (int, Fraction, complex, GaussianRational)):
                return NotImplemented
            g = GaussianRational.coerce(other)
            if not g:
                return ZERO
            return ParamScalar._from_dict({k: v * g for k, v in self._d.items()})
        if not self._d or not other._d:
            return ZERO
        d: dict = {}
        for k1, v1 in self._d.items():
            for k2, v2 in other._d.items():
                k = k1 * k2
                v = v1 * v2
                if k in d:
                    s = d[k] + v
                    if s:
                        d[k] = s
                    else:
                        del d[k]
                else:
                    d[k] = v
        return ParamScalar._from_dict(d)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        out = ONE
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def is_monomial(self) -> bool:
        return len(self._d) == 1

    def is_constant(self) -> bool:
        return all(not k for k in self._d)

    def constant_value(self) -> GaussianRational:
        return self._d.get(ONE_MONOMIAL, GaussianRational(0))

    def inverse(self) -> "ParamScalar":
        if len(self._d) != 1:
            raise NotDivisible(f"{self} is not a unit of the Laurent ring")
        (k, v), = self._d.items()
        return ParamScalar._from_dict({k.inverse(): v.inverse()})

    def __truediv__(self, other):
        return exact_divide(self, ParamScalar.coerce(other))

    def symbols(self) -> set:
        return {name for k in self._d for name in k.names()}

    def mentions_unknown(self) -> bool:
        return any(is_unknown_symbol(n) for n in self.symbols())

    def evaluate(self, values: Mapping[str, complex]) -> complex:
        total = 0j
        for k, v in self._d.items():
            term = complex(v)
            for name, e in k:
                try:
                    term *= complex(values[name]) ** e
                except KeyError:
                    raise KeyError(f"no numeric value bound for parameter {name!r}") from None
            total += term
        return total

    def substitute(self, name: str, value: "ParamScalar") -> "ParamScalar":
        """Replace a symbol with a scalar (negative powers need a unit)."""
        out = ZERO
        for k, v in self._d.items():
            e = k.degree_in(name)
            if not e:
                out = out + ParamScalar._from_dict({k: v})
                continue
            rest = ParamMonomial._raw(tuple(p for p in k if p[0] != name))
            out = out + ParamScalar._from_dict({rest: v}) * value ** e
        return out

    def __repr__(self):
        return f"ParamScalar({str(self)!r})"

    def __str__(self):
        if not self._d:
            return "0"
        parts = []
        for k, v in self.terms:
            if not k:
                parts.append(str(v))
                continue
            mono = str(k)
            if v == 1:
                parts.append(mono)
            elif v == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{v}*{mono}")
        return " + ".join(parts)


ZERO = ParamScalar()
ONE = ParamScalar.const(1)


def scalar_arith(a: ParamScalar, b: ParamScalar, op: str) -> ParamScalar:
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown scalar operation {op!r}")


def _normalize_shift(s: ParamScalar, names):
    """Multiply by a monomial so every exponent becomes >= 0 with a zero minimum."""
    shift = {}
    for n in names:
        shift[n] = -min(k.degree_in(n) for k, _ in s.items())
    mono = ParamMonomial(shift)
    return s * ParamScalar._from_dict({mono: GaussianRational(1)}), mono


def _lex_key(mono: ParamMonomial, names):
    return tuple(mono.degree_in(n) for n in names)


def exact_divide(a: ParamScalar, b: ParamScalar) -> ParamScalar:
    """Return ``q`` with ``q*b == a``; raise :class:`NotDivisible` otherwise."""
    if not b._d:
        raise ZeroDivisionError("division by the zero scalar")
    if not a._d:
        return ZERO
    if len(b._d) == 1:
        return a * b.inverse()
    names = sorted(a.symbols() | b.symbols())
    a_n, sa = _normalize_shift(a, names)
    b_n, sb = _normalize_shift(b, names)
    lead_b = max(b_n._d, key=lambda k: _lex_key(k, names))
    lead_b_key = _lex_key(lead_b, names)
    lead_b_coef_inv = b_n._d[lead_b].inverse()
    rem = a_n
    quot: dict = {}
    while rem._d:
        lead = max(rem._d, key=lambda k: _lex_key(k, names))
        key = _lex_key(lead, names)
        diff = [x - y for x, y in zip(key, lead_b_key)]
        if any(e < 0 for e in diff):
            raise NotDivisible(f"({a}) is not divisible by ({b})")
        mono = ParamMonomial(dict(zip(names, diff)))
        coef = rem._d[lead] * lead_b_coef_inv
        quot[mono] = coef
        rem = rem - ParamScalar._from_dict({mono: coef}) * b_n
    q = ParamScalar._from_dict(quot)
    # a_n = q*b_n with a_n = a*sa, b_n = b*sb  =>  a/b = q*sb/sa
    return q * ParamScalar._from_dict({sb / sa: GaussianRational(1)})

"""Linear differential operators with polynomial coefficients, normal ordered.

An operator is a finite sum ``sum_alpha f_alpha(x) d^alpha`` with every
derivative standing to the right of its coefficient.  Products are brought
back to this form with the generalized Leibniz rule.
"""
from __future__ import annotations

from itertools import product
from math import comb, prod
from typing import Dict, Iterable, Mapping, Optional, Tuple

from .algebra import (
    COORD_NAMES,
    NDIM,
    CoordPolynomial,
    LinearSystem,
    NotDivisible,
    ParamScalar,
    exact_divide,
    monomials_up_to,
    rank,
    solve_combination,
)
from .algebra.scalars import ONE, ZERO, unknown_symbol

DerivMultiIndex = Tuple[int, int, int, int]
NO_DERIV: DerivMultiIndex = (0, 0, 0, 0)


class NotMultiple(ArithmeticError):
    """The operator is not a coordinate-function multiple of the base operator."""


class MalformedBase(ValueError):
    """The base operator has no constant-coefficient term to divide by."""


def deriv_index(*exps: int) -> DerivMultiIndex:
    exps = tuple(int(e) for e in exps) + (0,) * (NDIM - len(exps))
    if len(exps) != NDIM or any(e < 0 for e in exps):
        raise ValueError(f"bad derivative multi-index {exps}")
    return exps


def unit_deriv(a: int, b: Optional[int] = None) -> DerivMultiIndex:
    e = [0] * NDIM
    e[a] += 1
    if b is not None:
        e[b] += 1
    return tuple(e)


def format_deriv(alpha: DerivMultiIndex) -> str:
    if not any(alpha):
        return ""
    return "d_" + "".join(name * e for name, e in zip(COORD_NAMES, alpha))


def _graded(e):
    return (sum(e), tuple(-k for k in e))


def _sub_indices(alpha):
    return product(*(range(a + 1) for a in alpha))


class DiffOp:
    """Zero-free map ``{DerivMultiIndex: CoordPolynomial}``; structural equality."""

    __slots__ = ("_d", "_hash")

    def __init__(self, terms=None):
        d: dict = {}
        if terms:
            items = terms.items() if isinstance(terms, Mapping) else terms
            for alpha, coef in items:
                alpha = deriv_index(*alpha)
                coef = CoordPolynomial.coerce(coef)
                if alpha in d:
                    coef = d[alpha] + coef
                if coef:
                    d[alpha] = coef
                else:
                    d.pop(alpha, None)
        self._d = d
        self._hash = None

    @classmethod
    def _from_dict(cls, d):
        op = cls.__new__(cls)
        op._d = d
        op._hash = None
        return op

    # constructors -------------------------------------------------------
    @classmethod
    def zero(cls) -> "DiffOp":
        return cls._from_dict({})

    @classmethod
    def multiplication(cls, f) -> "DiffOp":
        f = CoordPolynomial.coerce(f)
        return cls._from_dict({NO_DERIV: f} if f else {})

    @classmethod
    def derivative(cls, *alpha: int) -> "DiffOp":
        return cls._from_dict({deriv_index(*alpha): CoordPolynomial.const(1)})

    @classmethod
    def partial(cls, a: int, b: Optional[int] = None) -> "DiffOp":
        return cls._from_dict({unit_deriv(a, b): CoordPolynomial.const(1)})

    @classmethod
    def from_vector(cls, vec: Mapping) -> "DiffOp":
        """Inverse of :meth:`to_vector`."""
        d: Dict = {}
        for (alpha, mono), s in vec.items():
            if s:
                d.setdefault(alpha, {})[mono] = s
        return cls._from_dict({a: CoordPolynomial._from_dict(p) for a, p in d.items()})

    @classmethod
    def coerce(cls, value) -> "DiffOp":
        if isinstance(value, DiffOp):
            return value
        return cls.multiplication(value)

    # structure ----------------------------------------------------------
    @property
    def terms(self):
        return tuple((coef, alpha) for alpha, coef in sorted(self._d.items()))

    def items(self):
        return self._d.items()

    def coefficient(self, alpha) -> CoordPolynomial:
        return self._d.get(tuple(alpha), CoordPolynomial())

    def to_vector(self) -> Dict:
        """Flatten to ``{(deriv, coord_monomial): ParamScalar}``."""
        return {(a, m): s for a, p in self._d.items() for m, s in p.items()}

    def __bool__(self):
        return bool(self._d)

    def is_zero(self) -> bool:
        return not self._d

    def __eq__(self, other):
        if not isinstance(other, DiffOp):
            try:
                other = DiffOp.coerce(other)
            except (TypeError, ValueError):
                return NotImplemented
        return self._d == other._d

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._d.items()))
        return self._hash

    @property
    def order(self) -> int:
        return max((sum(a) for a in self._d), default=-1)

    @property
    def coordinate_degree(self) -> int:
        return max((p.degree for p in self._d.values()), default=-1)

    def is_scalar(self) -> bool:
        return all(a == NO_DERIV and p.is_constant() for a, p in self._d.items())

    def as_scalar(self) -> ParamScalar:
        if not self.is_scalar():
            raise ValueError("operator is not a parameter scalar")
        p = self._d.get(NO_DERIV)
        return p.constant_term() if p else ZERO

    def vector_field(self):
        """``(xi, eta)`` for a first-order operator ``xi^a d_a + eta``."""
        if self.order > 1:
            raise ValueError("operator is not first order")
        xi = tuple(self.coefficient(unit_deriv(a)) for a in range(NDIM))
        return xi, self.coefficient(NO_DERIV)

    def symbols(self) -> set:
        out = set()
        for p in self._d.values():
            out |= p.coefficient_symbols()
        return out

    def map_coefficients(self, fn) -> "DiffOp":
        d = {}
        for a, p in self._d.items():
            q = p.map_coefficients(fn)
            if q:
                d[a] = q
        return DiffOp._from_dict(d)

    # arithmetic ---------------------------------------------------------
    def __add__(self, other):
        other = DiffOp.coerce(other)
        if not other._d:
            return self
        if not self._d:
            return other
        d = dict(self._d)
        for a, p in other._d.items():
            if a in d:
                s = d[a] + p
                if s:
                    d[a] = s
                else:
                    del d[a]
            else:
                d[a] = p
        return DiffOp._from_dict(d)

    __radd__ = __add__

    def __neg__(self):
        return DiffOp._from_dict({a: -p for a, p in self._d.items()})

    def __sub__(self, other):
        return self + (-DiffOp.coerce(other))

    def __rsub__(self, other):
        return DiffOp.coerce(other) - self

    def scale(self, s) -> "DiffOp":
        """Left-multiply by a scalar or coordinate polynomial."""
        if isinstance(s, CoordPolynomial):
            return compose(DiffOp.multiplication(s), self)
        s = ParamScalar.coerce(s)
        if not s:
            return DiffOp()
        return DiffOp._from_dict({a: p.scale(s) for a, p in self._d.items()})

    def __mul__(self, other):
        if isinstance(other, DiffOp):
            return compose(self, other)
        if isinstance(other, CoordPolynomial):
            return compose(self, DiffOp.multiplication(other))
        return self.scale(other)

    def __rmul__(self, other):
        if isinstance(other, CoordPolynomial):
            return compose(DiffOp.multiplication(other), self)
        return self.scale(other)

    def __pow__(self, n: int):
        out = DiffOp.multiplication(1)
        for _ in range(n):
            out = compose(out, self)
        return out

    def __call__(self, f):
        return apply(self, f)

    def __repr__(self):
        return f"DiffOp({str(self)!r})"

    def __str__(self):
        """Expression text accepted back by the operator parser."""
        if not self._d:
            return "0"
        parts = []
        for alpha in sorted(self._d, key=_graded):
            for mono, s in sorted(self._d[alpha].items(), key=lambda kv: _graded(kv[0])):
                factors = []
                if s != ONE:
                    factors.append(f"({s})")
                cm = "*".join(
                    name if e == 1 else f"{name}^{e}"
                    for name, e in zip(COORD_NAMES, mono) if e
                )
                if cm:
                    factors.append(cm)
                if any(alpha):
                    factors.append(format_deriv(alpha))
                parts.append("*".join(factors) if factors else "1")
        return " + ".join(parts)


def compose(A: DiffOp, B: DiffOp) -> DiffOp:
    """Normal-ordered product ``A o B`` via the generalized Leibniz rule."""
    out: Dict[DerivMultiIndex, CoordPolynomial] = {}
    for alpha, f in A._d.items():
        subs = [(gamma, prod(comb(a, g) for a, g in zip(alpha, gamma))) for gamma in _sub_indices(alpha)]
        for beta, g in B._d.items():
            for gamma, binom in subs:
                dg = g.derivative(gamma)
                if not dg:
                    continue
                coef = f * dg
                if binom != 1:
                    coef = coef.scale(ParamScalar.const(binom))
                if not coef:
                    continue
                key = tuple(a - c + b for a, c, b in zip(alpha, gamma, beta))
                if key in out:
                    s = out[key] + coef
                    if s:
                        out[key] = s
                    else:
                        del out[key]
                else:
                    out[key] = coef
    return DiffOp._from_dict(out)


def commutator(A: DiffOp, B: DiffOp) -> DiffOp:
    return compose(A, B) - compose(B, A)


def nested_commutator(L: DiffOp, Q: DiffOp, p: int) -> DiffOp:
    """``[L, [L, ... [L, Q] ...]]`` with ``p`` brackets."""
    if p < 1:
        raise ValueError("commutator depth p must be >= 1")
    out = Q
    for _ in range(p):
        out = commutator(L, out)
        if not out:
            break
    return out


def apply(A: DiffOp, f) -> CoordPolynomial:
    """Let ``A`` act on the polynomial ``f``."""
    f = CoordPolynomial.coerce(f)
    total = CoordPolynomial()
    for alpha, coef in A._d.items():
        total = total + coef * f.derivative(alpha)
    return total


def _pivot_term(L: DiffOp):
    candidates = [a for a, p in L._d.items() if p.is_constant()]
    if not L or not candidates:
        raise MalformedBase("base operator needs a constant-coefficient term")
    alpha = min(candidates, key=lambda a: (sum(a), a))
    return alpha, L._d[alpha].constant_term()


def reduce_mod(C: DiffOp, L: DiffOp, max_zeta_degree: int) -> CoordPolynomial:
    """Return ``zeta`` with ``C == zeta * L`` and ``deg zeta <= max_zeta_degree``.

    The candidate comes from dividing C's coefficient at L's lowest-order
    constant-coefficient derivative; it is then verified on the whole operator.
    If that fails a linear solve over all admissible zeta is attempted.
    """
    alpha, lead = _pivot_term(L)
    if not C:
        return CoordPolynomial()
    try:
        zeta = C.coefficient(alpha).map_coefficients(lambda s: exact_divide(s, lead))
        if zeta.degree <= max_zeta_degree and DiffOp.multiplication(zeta) * L == C:
            return zeta
    except NotDivisible:
        pass
    zeta = _solve_zeta(C, L, max_zeta_degree)
    if zeta is None:
        raise NotMultiple("operator is not a multiple of the base operator")
    return zeta


def _solve_zeta(C: DiffOp, L: DiffOp, max_zeta_degree: int) -> Optional[CoordPolynomial]:
    monos = monomials_up_to(max_zeta_degree)
    columns = [(DiffOp.multiplication(CoordPolynomial({m: 1})) * L).to_vector() for m in monos]
    target = C.to_vector()
    try:
        coefs = solve_combination(columns, target)
    except NotDivisible:
        return None
    if coefs is None:
        return None
    return CoordPolynomial(dict(zip(monos, coefs)))


def symbol_value(op: DiffOp, values: Mapping[str, complex], sigma, kappa) -> complex:
    """Scalar that a constant-coefficient operator multiplies ``exp[i(k.x - s t)]`` by."""
    if op.coordinate_degree > 0:
        raise ValueError("symbol is defined here for constant coefficients only")
    factors = (-1j * sigma,) + tuple(1j * k for k in kappa)
    total = 0j
    for alpha, p in op.items():
        total += p.constant_term().evaluate(values) * prod(f ** e for f, e in zip(factors, alpha))
    return total


def ansatz_operator(slots: Iterable[Tuple[DerivMultiIndex, Tuple[int, ...]]], start: int = 0):
    """Operator with a fresh unknown symbol on each (derivative, monomial) slot."""
    d: Dict = {}
    names = []
    for k, (alpha, mono) in enumerate(slots):
        name = unknown_symbol(start + k)
        names.append(name)
        d.setdefault(alpha, {})[mono] = ParamScalar.symbol(name)
    op = DiffOp._from_dict({a: CoordPolynomial._from_dict(p) for a, p in d.items()})
    return op, names


def basis_rank(ops) -> int:
    """Dimension of the span of a list of operators."""
    vecs = [op.to_vector() for op in ops]
    keys = sorted({k for v in vecs for k in v}, key=repr)
    kidx = {k: i for i, k in enumerate(keys)}
    rows = [dict() for _ in keys]
    for j, v in enumerate(vecs):
        for k, s in v.items():
            rows[kidx[k]][j] = s
    return rank(LinearSystem.from_sparse(tuple(f"c{j}" for j in range(len(vecs))), rows))

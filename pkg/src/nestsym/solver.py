"""Bounded-degree symmetry search for the condition ``[L,[L,...[L,Q]...]] = zeta L``.

The unknown coefficient functions of Q and zeta are truncated to polynomials of
fixed degree, each monomial slot gets its own unknown symbol, and matching the
coefficients of every (monomial, derivative) pair gives a homogeneous linear
system.  The nested commutator is linear in Q, so the system is exact: its
nullspace is precisely the set of polynomial solutions within the bounds.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from itertools import product
from typing import Dict, List, Optional, Sequence, Tuple

from .algebra import (
    CoordPolynomial,
    LinearSystem,
    NotDivisible,
    ParamScalar,
    monomials_up_to,
    normalize_leading,
    nullspace,
    reduce_against,
    solve_combination,
)
from .algebra.scalars import ZERO, is_unknown_symbol, unknown_symbol
from .algebra.polynomials import NDIM
from .diffop import (
    NO_DERIV,
    DiffOp,
    NotMultiple,
    ansatz_operator,
    commutator,
    nested_commutator,
    reduce_mod,
)

log = logging.getLogger(__name__)


class VerificationFailed(RuntimeError):
    """A solved generator failed its own symmetry condition (internal error)."""


@dataclass(frozen=True)
class NotSymmetry:
    """Negative result of :func:`verify_symmetry`."""

    p: int
    reason: str = "nested commutator is not a multiple of L"

    def __bool__(self):
        return False


@dataclass(frozen=True)
class AnsatzSpec:
    """Degree bounds for ``Q = xi^alpha(x) d^alpha + eta(x)`` and ``zeta(x)``.

    ``deg_eta=None`` suppresses eta.  ``min_deg_xi`` restricts xi to monomials
    of at least that degree (homogeneous ansatz when equal to ``deg_xi``).
    """

    p: int
    deg_xi: int
    deg_eta: Optional[int]
    deg_zeta: int
    max_deriv_order: int = 1
    min_deg_xi: int = 0

    def __post_init__(self):
        if self.p < 1:
            raise ValueError("p must be >= 1")
        degs = [self.deg_xi, self.deg_zeta, self.max_deriv_order, self.min_deg_xi]
        if self.deg_eta is not None:
            degs.append(self.deg_eta)
        if any(dg < 0 for dg in degs):
            raise ValueError("degree bounds must be >= 0")
        if self.min_deg_xi > self.deg_xi:
            raise ValueError("min_deg_xi exceeds deg_xi")

    @classmethod
    def default(cls, p: int) -> "AnsatzSpec":
        if p == 1:
            return cls(p=1, deg_xi=2, deg_eta=2, deg_zeta=1)
        return cls(p=p, deg_xi=1, deg_eta=None, deg_zeta=0)


def _deriv_indices(max_order: int):
    out = []
    for order in range(1, max_order + 1):
        level = [a for a in product(range(order + 1), repeat=NDIM) if sum(a) == order]
        out.extend(sorted(level, reverse=True))
    return out


def ansatz_slots(spec: AnsatzSpec):
    """``(q_slots, zeta_monomials)``; q_slots are ``(deriv, monomial)`` pairs."""
    q_slots = []
    xi_monos = monomials_up_to(spec.deg_xi, spec.min_deg_xi)
    for alpha in _deriv_indices(spec.max_deriv_order):
        q_slots.extend((alpha, m) for m in xi_monos)
    if spec.deg_eta is not None:
        q_slots.extend((NO_DERIV, m) for m in monomials_up_to(spec.deg_eta))
    return q_slots, monomials_up_to(spec.deg_zeta)


def _symbolic(q_slots, zeta_monos):
    Q, _ = ansatz_operator(q_slots)
    n = len(q_slots)
    zeta = CoordPolynomial._from_dict(
        {m: ParamScalar.symbol(unknown_symbol(n + k)) for k, m in enumerate(zeta_monos)}
    )
    return Q, zeta


def _split_linear(s: ParamScalar, index: Dict[str, int]) -> Dict[int, ParamScalar]:
    row: Dict[int, ParamScalar] = {}
    for mono, coef in s.items():
        unknowns = [(k, e) for k, e in mono if is_unknown_symbol(k)]
        if len(unknowns) != 1 or unknowns[0][1] != 1:
            raise VerificationFailed(f"condition is not linear in the unknowns: {mono}")
        name = unknowns[0][0]
        rest = type(mono)._raw(tuple(pr for pr in mono if pr[0] != name))
        j = index[name]
        row[j] = row.get(j, ZERO) + ParamScalar({rest: coef})
    return {j: v for j, v in row.items() if v}


def determining_system(L: DiffOp, spec: AnsatzSpec) -> LinearSystem:
    """Coefficient equations of ``nested(L, Q, p) - zeta L = 0`` for the ansatz."""
    return _determining(L, spec)[0]


def _determining(L: DiffOp, spec: AnsatzSpec):
    if any(is_unknown_symbol(s) for s in L.symbols()):
        raise ValueError("base operator may not contain unknown symbols")
    q_slots, zeta_monos = ansatz_slots(spec)
    Q, zeta = _symbolic(q_slots, zeta_monos)
    expr = nested_commutator(L, Q, spec.p) - DiffOp.multiplication(zeta) * L
    names = [unknown_symbol(k) for k in range(len(q_slots) + len(zeta_monos))]
    index = {n: j for j, n in enumerate(names)}
    rows = []
    for key in sorted(expr.to_vector()):
        alpha, mono = key
        row = _split_linear(expr.coefficient(alpha).get(mono), index)
        if row:
            rows.append(row)
    return LinearSystem.from_sparse(names, rows), q_slots, zeta_monos


@dataclass(frozen=True)
class SymmetryBasis:
    generators: Tuple[DiffOp, ...]
    zetas: Tuple[CoordPolynomial, ...]
    spec: AnsatzSpec

    @property
    def dimension(self) -> int:
        return len(self.generators)

    def expand(self, op: DiffOp) -> Optional[List[ParamScalar]]:
        """Coefficients of ``op`` in this basis, or None if outside the span."""
        return expand_in_basis(op, self.generators)


def solve_symmetries(L: DiffOp, spec: AnsatzSpec) -> SymmetryBasis:
    system, q_slots, zeta_monos = _determining(L, spec)
    log.debug("determining system: %d equations, %d unknowns", len(system.rows), system.num_unknowns)
    nq = len(q_slots)
    gens, zetas = [], []
    for vec in nullspace(system):
        vec = normalize_leading(vec)
        d: Dict = {}
        for (alpha, mono), v in zip(q_slots, vec[:nq]):
            if v:
                d.setdefault(alpha, {})[mono] = v
        Q = DiffOp._from_dict({a: CoordPolynomial._from_dict(p) for a, p in d.items()})
        zeta = CoordPolynomial({m: v for m, v in zip(zeta_monos, vec[nq:]) if v})
        try:
            check = reduce_mod(nested_commutator(L, Q, spec.p), L, spec.deg_zeta)
        except NotMultiple as exc:
            raise VerificationFailed(f"solved generator {Q} fails the condition") from exc
        if check != zeta:
            raise VerificationFailed(f"zeta mismatch for {Q}: {check} != {zeta}")
        gens.append(Q)
        zetas.append(zeta)
    return SymmetryBasis(tuple(gens), tuple(zetas), spec)


def verify_symmetry(L: DiffOp, Q: DiffOp, p: int, max_zeta_degree: int = 0):
    """``zeta`` with ``nested(L, Q, p) == zeta L``, else a :class:`NotSymmetry`."""
    try:
        return reduce_mod(nested_commutator(L, Q, p), L, max_zeta_degree)
    except NotMultiple:
        return NotSymmetry(p)


def expand_in_basis(op: DiffOp, basis: Sequence[DiffOp]) -> Optional[List[ParamScalar]]:
    return solve_combination([b.to_vector() for b in basis], op.to_vector())


def in_span(op: DiffOp, basis: Sequence[DiffOp]) -> bool:
    try:
        return expand_in_basis(op, basis) is not None
    except NotDivisible:
        # coefficients exist over the fraction field
        return True


@dataclass
class StructureTable:
    """``[Q_mu, Q_nu] = sum_sigma C[mu][nu][sigma] Q_sigma`` where closed."""

    constants: List[List[Optional[List[ParamScalar]]]]
    closure_ok: bool
    residuals: Dict[Tuple[int, int], DiffOp] = field(default_factory=dict)

    def __getitem__(self, key):
        mu, nu, sigma = key
        row = self.constants[mu][nu]
        return None if row is None else row[sigma]

    @property
    def size(self) -> int:
        return len(self.constants)


def structure_constants(basis: Sequence[DiffOp]) -> StructureTable:
    n = len(basis)
    vecs = [b.to_vector() for b in basis]
    table: List[List[Optional[List[ParamScalar]]]] = [[None] * n for _ in range(n)]
    residuals: Dict[Tuple[int, int], DiffOp] = {}
    for mu in range(n):
        table[mu][mu] = [ZERO] * n
        for nu in range(mu + 1, n):
            br = commutator(basis[mu], basis[nu])
            try:
                coefs = solve_combination(vecs, br.to_vector())
            except NotDivisible:
                coefs = None
            if coefs is None:
                residuals[(mu, nu)] = DiffOp.from_vector(reduce_against(vecs, br.to_vector()))
                continue
            table[mu][nu] = coefs
            table[nu][mu] = [-c for c in coefs]
    return StructureTable(table, not residuals, residuals)


def jacobi_defects(table: StructureTable) -> List[Tuple[int, int, int, int]]:
    """Index tuples where the Jacobi constraint on the constants fails."""
    n = table.size
    C = table.constants
    bad = []
    for a in range(n):
        for b in range(a + 1, n):
            for s in range(b + 1, n):
                for t in range(n):
                    total = ZERO
                    for lam in range(n):
                        for x, y, z in ((a, b, s), (b, s, a), (s, a, b)):
                            c1 = C[x][y][lam]
                            if c1:
                                c2 = C[lam][z][t]
                                if c2:
                                    total = total + c1 * c2
                    if total:
                        bad.append((a, b, s, t))
    return bad

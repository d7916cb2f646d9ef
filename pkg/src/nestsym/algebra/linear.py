"""Fraction-free linear algebra over the Laurent parameter ring.

Elimination is Bareiss-style Gauss-Jordan: every update
``row <- (p*row - a*pivot_row) / prev`` is an exact division (Sylvester's
identity), so entries never leave the ring and no polynomial GCDs are needed.
After the sweep every pivot entry equals the same value ``d`` (the last
pivot), which makes reading off nullspace vectors denominator-free.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Hashable, List, Optional, Sequence, Tuple

from .scalars import ONE, ZERO, NotDivisible, ParamScalar, exact_divide

SparseRow = Dict[int, ParamScalar]


@dataclass(frozen=True)
class LinearSystem:
    """Homogeneous system ``rows @ unknowns = 0`` with ParamScalar entries."""

    unknowns: Tuple[str, ...]
    rows: Tuple[Tuple[ParamScalar, ...], ...]

    def __post_init__(self):
        n = len(self.unknowns)
        for r in self.rows:
            if len(r) != n:
                raise ValueError("row length does not match the number of unknowns")
            for entry in r:
                if entry.mentions_unknown():
                    raise ValueError("system coefficients may not contain unknown symbols")

    @classmethod
    def from_sparse(cls, unknowns: Sequence[str], rows: Sequence[SparseRow]) -> "LinearSystem":
        n = len(unknowns)
        dense = []
        for r in rows:
            if not r:
                continue
            full = [ZERO] * n
            for j, v in r.items():
                full[j] = v
            dense.append(tuple(full))
        return cls(tuple(unknowns), tuple(dense))

    @property
    def num_unknowns(self) -> int:
        return len(self.unknowns)

    def sparse_rows(self) -> List[SparseRow]:
        return [{j: v for j, v in enumerate(r) if v} for r in self.rows]

    def permuted(self, order: Sequence[int]) -> "LinearSystem":
        """Reorder unknowns: new column k is old column ``order[k]``."""
        return LinearSystem(
            tuple(self.unknowns[j] for j in order),
            tuple(tuple(r[j] for j in order) for r in self.rows),
        )

    def residuals(self, vector: Sequence[ParamScalar]) -> List[ParamScalar]:
        out = []
        for r in self.rows:
            s = ZERO
            for a, v in zip(r, vector):
                if a and v:
                    s = s + a * v
            out.append(s)
        return out


def _update(row: SparseRow, prow: SparseRow, col: int, p: ParamScalar, prev: ParamScalar) -> SparseRow:
    a = row.get(col)
    out: SparseRow = {}
    if a is None:
        if p == prev:
            return row
        for k, v in row.items():
            w = v * p
            if prev != ONE:
                w = exact_divide(w, prev)
            out[k] = w
        return out
    for k in set(row) | set(prow):
        if k == col:
            continue
        v = row.get(k, ZERO) * p - a * prow.get(k, ZERO)
        if not v:
            continue
        if prev != ONE:
            v = exact_divide(v, prev)
        out[k] = v
    return out


def fraction_free_rref(rows: Sequence[SparseRow], ncols: int):
    """Return ``(pivot_rows, pivot_cols, d)`` of the fraction-free reduced form.

    Pivot rule: columns left to right, first remaining row (input order) with a
    nonzero entry.  Each returned row has entry ``d`` at its pivot column and
    zero at every other pivot column.
    """
    remaining = [dict(r) for r in rows if r]
    pivots: List[Tuple[SparseRow, int]] = []
    prev = ONE
    for col in range(ncols):
        idx = next((i for i, r in enumerate(remaining) if col in r), None)
        if idx is None:
            continue
        prow = remaining.pop(idx)
        p = prow[col]
        pivots = [(_update(r, prow, col, p, prev), c) for r, c in pivots]
        nxt = []
        for r in remaining:
            r2 = _update(r, prow, col, p, prev)
            if r2:
                nxt.append(r2)
        remaining = nxt
        pivots.append((prow, col))
        prev = p
    for r, c in pivots:
        assert r[c] == prev, "fraction-free invariant violated"
    return [r for r, _ in pivots], [c for _, c in pivots], prev


def _canonical_sign(vec: List[ParamScalar]) -> List[ParamScalar]:
    lead = next((v for v in vec if v), None)
    if lead is None:
        return vec
    _, coef = lead.terms[0]
    if coef.re < 0 or (coef.re == 0 and coef.im < 0):
        return [-v for v in vec]
    return vec


def nullspace(system: LinearSystem) -> List[Tuple[ParamScalar, ...]]:
    """Basis of the nullspace over the fraction field, entries in the Laurent ring.

    One vector per free column (in column order); the free column carries the
    common pivot value ``d``.  Overall sign is fixed so the first term of the
    leading entry has a positive coefficient.
    """
    n = system.num_unknowns
    prow, pcols, d = fraction_free_rref(system.sparse_rows(), n)
    pivot_set = set(pcols)
    basis = []
    for f in range(n):
        if f in pivot_set:
            continue
        vec = [ZERO] * n
        vec[f] = d
        for r, c in zip(prow, pcols):
            entry = r.get(f)
            if entry:
                vec[c] = -entry
        basis.append(tuple(_canonical_sign(vec)))
    return basis


def rank(system: LinearSystem) -> int:
    _, pcols, _ = fraction_free_rref(system.sparse_rows(), system.num_unknowns)
    return len(pcols)


def normalize_leading(vec: Sequence[ParamScalar]) -> Tuple[ParamScalar, ...]:
    """Divide by the leading nonzero entry when that division is exact."""
    lead = next((v for v in vec if v), None)
    if lead is None or lead == ONE:
        return tuple(vec)
    try:
        return tuple(exact_divide(v, lead) for v in vec)
    except NotDivisible:
        return tuple(vec)


def solve_combination(
    columns: Sequence[Dict[Hashable, ParamScalar]], target: Dict[Hashable, ParamScalar]
) -> Optional[List[ParamScalar]]:
    """Find ring coefficients ``c`` with ``sum c_i columns[i] == target``.

    Vectors are sparse maps from arbitrary keys to scalars.  Returns None if
    ``target`` is outside the span; raises NotDivisible if the coefficients exist
    only in the fraction field.
    """
    keys = sorted({k for col in columns for k in col} | set(target), key=repr)
    kidx = {k: i for i, k in enumerate(keys)}
    rows: List[SparseRow] = [dict() for _ in keys]
    for j, col in enumerate(columns):
        for k, v in col.items():
            rows[kidx[k]][j] = v
    t = len(columns)
    for k, v in target.items():
        rows[kidx[k]][t] = v
    names = tuple(f"c{j}" for j in range(t + 1))
    system = LinearSystem.from_sparse(names, rows)
    if not target:
        return [ZERO] * t
    for vec in nullspace(system):
        if vec[t]:
            return [exact_divide(-v, vec[t]) for v in vec[:t]]
    return None


def reduce_against(
    basis: Sequence[Dict[Hashable, ParamScalar]], target: Dict[Hashable, ParamScalar]
) -> Dict[Hashable, ParamScalar]:
    """Component of ``target`` outside span(basis), up to a nonzero ring factor."""
    keys = sorted({k for b in basis for k in b} | set(target), key=repr)
    kidx = {k: i for i, k in enumerate(keys)}
    rows = [{kidx[k]: v for k, v in b.items() if v} for b in basis]
    prows, pcols, d = fraction_free_rref(rows, len(keys))
    t = {kidx[k]: v for k, v in target.items() if v}
    red = {k: v * d for k, v in t.items()}
    for r, c in zip(prows, pcols):
        a = t.get(c)
        if not a:
            continue
        for k, v in r.items():
            w = red.get(k, ZERO) - a * v
            if w:
                red[k] = w
            else:
                red.pop(k, None)
    vec = [red.get(i, ZERO) for i in range(len(keys))]
    vec = normalize_leading(vec)
    return {keys[i]: v for i, v in enumerate(vec) if v}

"""Deterministic JSON and text rendering of run results."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List

import numpy as np

from ..algebra import CoordPolynomial, GaussianRational, ParamScalar
from ..diffop import DiffOp
from ..waves import PhaseForm


def rational(q) -> str:
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


def scalar_json(s: ParamScalar) -> List[Dict[str, Any]]:
    return [
        {"re": rational(v.re), "im": rational(v.im), "params": dict(k)}
        for k, v in s.terms
    ]


def poly_json(p: CoordPolynomial) -> Dict[str, Any]:
    return {
        "text": str(DiffOp.multiplication(p)),
        "terms": [{"coefficient": scalar_json(s), "coord": list(m)} for m, s in p.terms],
    }


def op_json(op: DiffOp) -> Dict[str, Any]:
    terms = []
    for poly, alpha in op.terms:
        for mono, s in poly.terms:
            terms.append({"coefficient": scalar_json(s), "coord": list(mono), "deriv": list(alpha)})
    return {"text": str(op), "terms": terms}


def to_json(value):
    """Recursively convert results into JSON-compatible data."""
    if isinstance(value, DiffOp):
        return op_json(value)
    if isinstance(value, CoordPolynomial):
        return poly_json(value)
    if isinstance(value, ParamScalar):
        return {"text": str(value), "terms": scalar_json(value)}
    if isinstance(value, GaussianRational):
        return {"re": rational(value.re), "im": rational(value.im)}
    if isinstance(value, PhaseForm):
        return {"sigma": to_json(value.sigma), "kappa": [to_json(k) for k in value.kappa]}
    if isinstance(value, Fraction):
        return rational(value)
    if isinstance(value, complex):
        return {"re": value.real, "im": value.imag}
    if isinstance(value, (np.floating, np.integer, np.bool_)):
        return value.item()
    if isinstance(value, np.ndarray):
        return [to_json(v) for v in value.tolist()]
    if isinstance(value, dict):
        return {str(k): to_json(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_json(v) for v in value]
    return value


def to_text(value) -> str:
    if isinstance(value, (DiffOp, CoordPolynomial, ParamScalar)):
        return str(value) if not isinstance(value, CoordPolynomial) else str(DiffOp.multiplication(value))
    if isinstance(value, PhaseForm):
        return f"sigma={value.sigma} kappa=({', '.join(str(k) for k in value.kappa)})"
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    if isinstance(value, dict):
        return "{" + ", ".join(f"{k}: {to_text(v)}" for k, v in value.items()) + "}"
    if isinstance(value, (list, tuple)):
        return "[" + ", ".join(to_text(v) for v in value) + "]"
    return str(value)


@dataclass
class RunReport:
    command: List[str]
    payload: Dict[str, Any] = field(default_factory=dict)
    flags: Dict[str, bool] = field(default_factory=dict)
    exit_code: int = 0

    def as_json(self) -> str:
        data = {"command": self.command, **to_json(self.payload)}
        if self.flags:
            data["flags"] = self.flags
        return json.dumps(data, sort_keys=True, indent=2)

    def as_text(self) -> str:
        lines = []
        for key, value in self.payload.items():
            if isinstance(value, dict):
                lines.append(f"{key}:")
                lines.extend(f"  {k}: {to_text(v)}" for k, v in value.items())
            elif isinstance(value, list) and value and isinstance(value[0], (DiffOp, dict)):
                lines.append(f"{key}:")
                lines.extend(f"  [{n}] {to_text(v)}" for n, v in enumerate(value))
            else:
                lines.append(f"{key}: {to_text(value)}")
        for key, ok in self.flags.items():
            lines.append(f"{key}: {'ok' if ok else 'FAILED'}")
        return "\n".join(lines)

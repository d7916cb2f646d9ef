"""``nestsym`` command line.

Exit codes: 0 success, 1 negative verification result, 2 usage or input
error, 3 internal inconsistency.
"""
from __future__ import annotations

import argparse
import logging
import sys
import time
from fractions import Fraction
from pathlib import Path
from typing import Dict, List, Optional

from .. import catalog, flows, waves
from ..algebra import NotDivisible
from ..diffop import MalformedBase, commutator, nested_commutator
from ..solver import (
    AnsatzSpec,
    NotSymmetry,
    VerificationFailed,
    jacobi_defects,
    solve_symmetries,
    structure_constants,
    verify_symmetry,
)
from .parser import ExpressionSyntaxError, NonScalarDenominator, UnknownSymbol, parse_operator
from .report import RunReport

log = logging.getLogger("nestsym")

EXIT_OK, EXIT_NEGATIVE, EXIT_USAGE, EXIT_INTERNAL = 0, 1, 2, 3
DEFAULT_PARAMS = {"hbar": 1.0, "m": 1.0, "m0": 1.0, "c": 1.0}
TOLERANCE = 1e-9


class UsageError(ValueError):
    pass


def operator_arg(text: str):
    """Catalog name or operator expression."""
    if text in catalog.NAMED:
        return catalog.lookup(text)
    return parse_operator(text)


def parse_params(text: Optional[str]) -> Dict[str, float]:
    out = dict(DEFAULT_PARAMS)
    if not text:
        return out
    for item in text.split(","):
        name, sep, value = item.partition("=")
        if not sep:
            raise UsageError(f"bad parameter binding {item!r}")
        try:
            out[name.strip()] = float(Fraction(value.strip()))
        except ValueError:
            raise UsageError(f"bad parameter value {item!r}") from None
    return out


def parse_vector(text: str, size: int) -> List[float]:
    try:
        vals = [float(Fraction(v)) for v in text.split(",")]
    except ValueError:
        raise UsageError(f"bad vector {text!r}") from None
    if len(vals) != size:
        raise UsageError(f"expected {size} comma-separated values, got {text!r}")
    return vals


def velocity_arg(text: str) -> List[float]:
    """A speed along x or a full ``vx,vy,vz`` vector."""
    if "," in text:
        return parse_vector(text, 3)
    return [float(Fraction(text)), 0.0, 0.0]


# --- commands ----------------------------------------------------------------

def cmd_commutator(args, report: RunReport):
    report.payload["result"] = commutator(operator_arg(args.A), operator_arg(args.B))


def cmd_nested(args, report: RunReport):
    report.payload["result"] = nested_commutator(operator_arg(args.L), operator_arg(args.Q), args.p)


def cmd_verify(args, report: RunReport):
    L, Q = operator_arg(args.L), operator_arg(args.Q)
    report.payload["commutator"] = commutator(L, Q)
    zeta = verify_symmetry(L, Q, args.p, args.zeta_deg)
    if isinstance(zeta, NotSymmetry):
        report.payload["result"] = "NotSymmetry"
        report.flags["symmetry"] = False
        report.exit_code = EXIT_NEGATIVE
        return
    report.payload["result"] = "symmetry"
    report.payload["zeta"] = zeta
    report.flags["symmetry"] = True


def cmd_solve(args, report: RunReport):
    L = {"schrodinger": catalog.schrodinger, "dalembert": catalog.dalembert}.get(args.op)
    L = L() if L else operator_arg(args.op)
    spec = AnsatzSpec(
        p=args.p,
        deg_xi=args.deg_xi,
        deg_eta=None if args.no_eta else args.deg_eta,
        deg_zeta=args.deg_zeta,
        min_deg_xi=args.min_deg_xi,
    )
    basis = solve_symmetries(L, spec)
    report.payload["dimension"] = basis.dimension
    report.payload["generators"] = list(basis.generators)
    report.payload["zeta"] = list(basis.zetas)


def _load_basis(name: str):
    if name == "sch13":
        return catalog.sch13()
    if name == "igl20":
        return catalog.igl20()
    path = Path(name)
    if not path.is_file():
        raise UsageError(f"basis must be sch13, igl20 or a file, got {name!r}")
    ops = {}
    for n, line in enumerate(path.read_text().splitlines()):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        label, sep, expr = line.partition("=")
        if not sep:
            label, expr = f"g{n}", line
        ops[label.strip()] = operator_arg(expr.strip())
    return ops


def cmd_structure(args, report: RunReport):
    ops = _load_basis(args.basis)
    labels = list(ops)
    table = structure_constants(list(ops.values()))
    brackets = {}
    for mu in range(len(labels)):
        for nu in range(mu + 1, len(labels)):
            row = table.constants[mu][nu]
            if row is None:
                continue
            nonzero = {labels[s]: c for s, c in enumerate(row) if c}
            if nonzero:
                brackets[f"[{labels[mu]},{labels[nu]}]"] = nonzero
    report.payload["dimension"] = len(labels)
    report.payload["brackets"] = brackets
    report.flags["closed"] = table.closure_ok
    if not table.closure_ok:
        report.payload["residuals"] = {
            f"[{labels[a]},{labels[b]}]": r for (a, b), r in sorted(table.residuals.items())
        }
        report.exit_code = EXIT_NEGATIVE
        return
    defects = jacobi_defects(table)
    report.flags["jacobi"] = not defects
    if defects:
        report.exit_code = EXIT_INTERNAL


def cmd_flow(args, report: RunReport, params):
    op = operator_arg(args.gen)
    x = parse_vector(args.x, 4)
    cfg = flows.NumericIntegratorConfig(step=args.step)
    fmap = flows.flow_map(op, args.theta, params, method=args.method, cfg=cfg)
    report.payload["kind"] = fmap.kind
    report.payload["theta"] = args.theta
    report.payload["result"] = [float(v) for v in fmap(x)]


def _massive_state(args, params):
    c = args.c if args.c is not None else params["c"]
    m0 = args.m0 if args.m0 is not None else params["m0"]
    return waves.ParticleState.massive(m0, velocity_arg(args.v), c)


def cmd_wave(args, report: RunReport, params):
    hbar = params["hbar"]
    c = args.c if args.c is not None else params["c"]
    if args.action == "massless":
        return _wave_massless(args, report, hbar, c)
    state = _massive_state(args, params)
    rel = waves.OperatorBinding("relativistic", hbar=hbar, m0=state.m0, c=c, state=state)
    if args.action == "dispersion":
        nonrel = waves.OperatorBinding("schrodinger", hbar=hbar, m0=state.m0, c=c)
        res = {"schrodinger": waves.dispersion_residual(nonrel, waves.solution("schrodinger", state, hbar))}
        phi1, phi2 = waves.make_solutions(state, rel)
        res["phi1"] = waves.dispersion_residual(rel, phi1)
        res["phi2"] = waves.dispersion_residual(rel, phi2)
        report.payload["residual"] = res
        report.flags["dispersion"] = all(abs(r) <= 1e-12 * max(1.0, state.W / hbar) for r in res.values())
    elif args.action == "solutions":
        phi1, phi2 = waves.make_solutions(state, rel)
        report.payload["result"] = {"phi1": phi1, "phi2": phi2}
        report.payload["phase_velocity"] = {"phi1": phi1.phase_velocity(), "phi2": phi2.phase_velocity()}
        report.payload["kinematics"] = {"beta": state.beta, "W": state.W, "P": list(state.P)}
    elif args.action == "weight":
        spec = waves.BoostSpec(args.boost, args.V, c)
        if args.boost == "galilei":
            family = "schrodinger"
            binding = waves.OperatorBinding("schrodinger", hbar=hbar, m0=state.m0, c=c)
            printed = waves.galilei_weight(state.m0, args.V, hbar)
        else:
            family = args.solution
            binding = rel
            printed = {"phi1": waves.lorentz_weight_phi1, "phi2": waves.lorentz_weight_phi2}[family](
                state, args.V, hbar)
        Phi = waves.weight_function(family, spec, state, hbar)
        phi = waves.solution(family, state, hbar)
        residual = waves.verify_weight_set(Phi, phi, spec, binding)
        report.payload["result"] = Phi
        report.payload["printed"] = printed
        report.payload["printed_distance"] = Phi.distance(printed)
        report.payload["residual"] = residual
        report.payload["printed_residual"] = waves.verify_weight_set(printed, phi, spec, binding)
        report.flags["weight_set"] = abs(residual) <= TOLERANCE
    elif args.action == "limits":
        beta = state.beta
        V = args.V if args.V else beta * c / 2
        direction = state.n
        report.payload["beta"] = beta
        report.payload["result"] = {
            q: waves.nonrel_limit_gap(q, beta, V_ratio=V / (beta * c), direction=direction,
                                      m0=state.m0, c=c, hbar=hbar)
            for q in ("phi1", "phi2", "Phi2")
        }
    if not all(report.flags.values()):
        report.exit_code = EXIT_NEGATIVE


def _wave_massless(args, report: RunReport, hbar, c):
    n = parse_vector(args.n, 3)
    state = waves.ParticleState.massless_state(args.P, n, c)
    binding = waves.OperatorBinding("massless", hbar=hbar, c=c, state=state)
    phi1, phi2 = waves.make_solutions(state, binding)
    report.payload["phase_velocity"] = {"phi1": phi1.phase_velocity(), "phi2": phi2.phase_velocity()}
    report.payload["residual"] = {
        "phi1": waves.dispersion_residual(binding, phi1),
        "phi2": waves.dispersion_residual(binding, phi2),
    }
    spec = waves.BoostSpec("lorentz", args.V, c)
    Phi1 = waves.weight_function("phi1", spec, state, hbar)
    Phi2 = waves.weight_function("phi2", spec, state, hbar)
    report.payload["weight"] = {"Phi1": Phi1, "Phi2": Phi2}
    report.payload["printed_distance"] = {
        "Phi1": Phi1.distance(waves.massless_weight("phi1", args.P, state.n, args.V, c, hbar)),
        "Phi2": Phi2.distance(waves.massless_weight("phi2", args.P, state.n, args.V, c, hbar)),
    }
    report.payload["two_component"] = waves.two_component_check(Phi1, Phi2, phi1, phi2)
    report.flags["two_component"] = report.payload["two_component"] <= 1e-12


# --- argument parsing ---------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default=argparse.SUPPRESS)
    common.add_argument("--params", default=argparse.SUPPRESS,
                        help="numeric binding, e.g. hbar=1,m=1,c=1")
    common.add_argument("-v", "--verbose", action="store_true", default=argparse.SUPPRESS)

    parser = argparse.ArgumentParser(prog="nestsym", parents=[common],
                                     description="Nested-commutator symmetries of linear PDE operators.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("commutator", parents=[common], help="[A, B]")
    p.add_argument("A")
    p.add_argument("B")

    p = sub.add_parser("nested", parents=[common], help="[L,[L,...[L,Q]]] with p brackets")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("L")
    p.add_argument("Q")

    p = sub.add_parser("verify", parents=[common], help="check the p-fold symmetry condition")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--zeta-deg", type=int, default=0)
    p.add_argument("L")
    p.add_argument("Q")

    p = sub.add_parser("solve", parents=[common], help="bounded-degree symmetry search")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--deg-xi", type=int, required=True)
    p.add_argument("--min-deg-xi", type=int, default=0)
    eta = p.add_mutually_exclusive_group()
    eta.add_argument("--deg-eta", type=int, default=0)
    eta.add_argument("--no-eta", action="store_true")
    p.add_argument("--deg-zeta", type=int, required=True)
    p.add_argument("--op", default="schrodinger", help="schrodinger, dalembert or an expression")

    p = sub.add_parser("structure", parents=[common], help="structure constants of a basis")
    p.add_argument("--basis", required=True, help="sch13, igl20 or a file of 'name = expr' lines")

    p = sub.add_parser("flow", parents=[common], help="evaluate a one-parameter flow")
    p.add_argument("--gen", required=True)
    p.add_argument("--theta", type=float, required=True)
    p.add_argument("--x", required=True, help="t,x,y,z")
    p.add_argument("--method", choices=("closed", "rk4"), default="closed")
    p.add_argument("--step", type=float, default=None)

    p = sub.add_parser("wave", parents=[common], help="plane-wave and weight-function checks")
    p.add_argument("action", choices=("dispersion", "solutions", "weight", "limits", "massless"))
    p.add_argument("--m0", type=float, default=None)
    p.add_argument("--v", default="0.6", help="speed along x or vx,vy,vz")
    p.add_argument("--V", type=float, default=0.0)
    p.add_argument("--c", type=float, default=None)
    p.add_argument("--boost", choices=("galilei", "lorentz"), default="lorentz")
    p.add_argument("--solution", choices=("phi1", "phi2"), default="phi1")
    p.add_argument("--P", type=float, default=1.0, help="massless momentum magnitude")
    p.add_argument("--n", default="1,0,0", help="massless direction")
    return parser


COMMANDS = {
    "commutator": cmd_commutator,
    "nested": cmd_nested,
    "verify": cmd_verify,
    "solve": cmd_solve,
    "structure": cmd_structure,
}

INPUT_ERRORS = (
    UsageError,
    ExpressionSyntaxError,
    NonScalarDenominator,
    UnknownSymbol,
    MalformedBase,
    NotDivisible,
    flows.SingularFlow,
    flows.BadIndices,
    waves.KinematicsUndefined,
    KeyError,
    ValueError,
)


def run(argv: List[str]) -> RunReport:
    """Execute one command line; raises on input errors."""
    args = build_parser().parse_args(argv)
    report = RunReport(command=list(argv))
    start = time.perf_counter()
    if args.command in COMMANDS:
        COMMANDS[args.command](args, report)
    else:
        params = parse_params(getattr(args, "params", None))
        handler = cmd_flow if args.command == "flow" else cmd_wave
        handler(args, report, params)
    log.debug("%s finished in %.3fs", args.command, time.perf_counter() - start)
    return report


def main(argv: Optional[List[str]] = None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    logging.basicConfig(level=logging.DEBUG if getattr(args, "verbose", False) else logging.WARNING,
                        format="%(name)s: %(message)s")
    try:
        report = run(argv)
    except VerificationFailed as exc:
        print(f"internal inconsistency: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except INPUT_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    fmt = getattr(args, "format", "text")
    print(report.as_json() if fmt == "json" else report.as_text())
    return report.exit_code


if __name__ == "__main__":
    sys.exit(main())

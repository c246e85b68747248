"""Batch command-line front end.

Every command writes one JSON report (stdout or ``--out``).  Exit codes:
0 success, 1 usage error, 2 numerical failure, 3 input error.
"""
from __future__ import annotations

import argparse
import datetime as _dt
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import __version__
from . import matrixcore as mc
from .design import closed_loop, deadbeat_gain, lqr, output_weight, state_feedback_gain
from .errors import DomainMismatch, InputError, LtiError, ParseError, SingularGramian, UsageError
from .files import SCHEMA_VERSION, digest, dumps, parse_model
from .gramian import (
    QUAD_TOL,
    controllability_gramian,
    min_energy_input,
    observability_gramian,
    reconstruct_initial_state,
)
from .simulate import (
    Constant,
    InputSignal,
    Samples,
    Sinusoid,
    Step,
    Zero,
    read_output_csv,
    simulate_continuous,
    simulate_discrete,
)
from .stability import bibo_integral, classify, equilibrium, lyapunov_check
from .statespace import CharPoly, characteristic_polynomial

COMMANDS = ("simulate", "stability", "ctrb-gramian", "obsv-gramian", "steer",
            "estimate-x0", "design-deadbeat", "design-place", "design-lqr")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


class _Failure(Exception):
    """Numerical failure that still carries a partial result."""

    def __init__(self, error: LtiError, result: dict):
        super().__init__(str(error))
        self.error = error
        self.result = result


# -- argument helpers ---------------------------------------------------------

def parse_vector(text: str) -> np.ndarray:
    try:
        return np.array([float(v) for v in text.split(",")])
    except ValueError:
        raise InputError(f"cannot parse vector {text!r}") from None


def parse_matrix(text: str) -> np.ndarray:
    try:
        return mc.as_matrix(json.loads(text))
    except json.JSONDecodeError:
        raise InputError(f"cannot parse matrix {text!r}; expected a JSON nested array") from None


def _kv(body: str) -> dict:
    out = {}
    for part in filter(None, body.split(",")):
        key, _, value = part.partition("=")
        out[key.strip()] = float(value)
    return out


def parse_input(spec: str) -> InputSignal:
    """``zero | constant:L[,L..] | step[:level=L,onset=T] |
    sin:omega=W,amp=A,phase=P | samples:path.csv``"""
    kind, _, body = spec.partition(":")
    try:
        if kind == "zero":
            return Zero()
        if kind == "constant":
            return Constant(tuple(parse_vector(body)) if body else 1.0)
        if kind == "step":
            kv = _kv(body)
            return Step(kv.get("level", 1.0), kv.get("onset", 0.0))
        if kind == "sin":
            kv = _kv(body)
            return Sinusoid(kv.get("amp", 1.0), kv.get("omega", 1.0), kv.get("phase", 0.0))
        if kind == "samples":
            rows = np.loadtxt(body, delimiter=",", skiprows=1, ndmin=2)
            return Samples(rows[:, 0], rows[:, 1:])
    except (ValueError, OSError) as exc:
        raise InputError(f"bad input signal {spec!r}: {exc}") from None
    raise InputError(f"unknown input kind {kind!r}")


def _eigs(spec) -> list:
    return [complex(z) for z in spec]


# -- commands -----------------------------------------------------------------

def cmd_simulate(model, args):
    u = parse_input(args.input)
    x0 = parse_vector(args.x0) if args.x0 else np.zeros(model.n)
    if model.is_discrete:
        if args.t1 != int(args.t1):
            raise UsageError("discrete horizon --t1 must be an integer")
        traj = simulate_discrete(model, x0, u, int(args.t1))
    else:
        traj = simulate_continuous(model, x0, u, args.t0, args.t1, args.steps,
                                   subintervals=args.subintervals)
    if args.csv:
        traj.to_csv(args.csv)
    result = {
        "input": u.describe(),
        "x0": x0,
        "points": len(traj),
        "final": {"t": traj.times[-1], "x": traj.states[-1], "y": traj.outputs[-1]},
    }
    return result, dict(traj.diagnostics)


def cmd_stability(model, args):
    rep = classify(model)
    result = {
        "eigenvalues": _eigs(rep.eigenvalues),
        "classification": rep.classification,
        "bibo_by_eigenvalues": rep.bibo_by_eigenvalues,
    }
    diag = {"eig_tol": 1e-9}
    if model.is_discrete and (args.P or args.u or args.bibo_t_end is not None):
        raise DomainMismatch("--u, --P and --bibo-* apply to continuous models only")
    if not model.is_discrete:
        u = parse_vector(args.u) if args.u else np.ones(model.m)
        try:
            x_bar = equilibrium(model, u)
            result["equilibrium"] = {"u": u, "x_bar": x_bar}
        except LtiError as exc:
            x_bar = np.zeros(model.n)
            result["equilibrium"] = {"u": u, "x_bar": None, "reason": type(exc).__name__}
        P = parse_matrix(args.P) if args.P else np.eye(model.n)
        cert = lyapunov_check(model, x_bar, P)
        result["lyapunov"] = {"P": cert.P, "S": cert.S, "verdict": cert.verdict,
                              "max_derivative_eig": cert.max_derivative_eig}
        if args.bibo_t_end is not None:
            prof = bibo_integral(model, args.bibo_t_end, args.bibo_samples)
            result["bibo"] = {
                "t_end": args.bibo_t_end,
                "final_integral": prof.integral_values[-1],
                "verdict": prof.verdict,
                "method": prof.method,
                "final_slope": prof.final_slope,
            }
            if args.bibo_csv:
                Path(args.bibo_csv).write_text(prof.to_csv(), newline="\n")
    return result, diag


def _gramian_result(rep):
    result = rep.to_dict()
    diag = {"panels": rep.panels} if rep.panels else {}
    if not rep.nonsingular:
        raise _Failure(SingularGramian(f"{rep.kind.value} Gramian is singular"), result)
    return result, diag


def cmd_ctrb(model, args):
    return _gramian_result(controllability_gramian(
        model, args.t0, args.t1, quad_tol=args.quad_tol, cond_limit=args.sing_thresh))


def cmd_obsv(model, args):
    return _gramian_result(observability_gramian(
        model, args.t1, quad_tol=args.quad_tol, cond_limit=args.sing_thresh))


def cmd_steer(model, args):
    x0 = parse_vector(args.x0) if args.x0 else np.zeros(model.n)
    x1 = parse_vector(args.x1)
    u = min_energy_input(model, x0, x1, args.t1, args.grid, t0=args.t0,
                         quad_tol=args.quad_tol, cond_limit=args.sing_thresh)
    if model.is_discrete:
        traj = simulate_discrete(model, x0, u, int(args.t1))
        times, values = u.times[:-1], u.values[:-1]
        energy = float(np.sum(values ** 2))
    else:
        traj = simulate_continuous(model, x0, u, args.t0, args.t1, args.grid)
        times, values = u.table()
        energy = u.energy
    if args.csv:
        header = "t," + ",".join(f"u{j + 1}" for j in range(model.m))
        lines = [header] + [",".join(f"{v:.17g}" for v in (t, *row)) for t, row in zip(times, values)]
        Path(args.csv).write_text("\n".join(lines) + "\n", newline="\n")
    result = {
        "x0": x0, "x1": x1, "horizon": [args.t0, args.t1],
        "input": u.describe(),
        "energy": energy,
        "reached": traj.states[-1],
        "endpoint_error": float(np.max(np.abs(traj.states[-1] - x1))),
    }
    return result, {"grid": args.grid}


def cmd_estimate(model, args):
    u = parse_input(args.input)
    times, outputs = read_output_csv(args.y)
    x0 = reconstruct_initial_state(model, u, (times, outputs), args.t1,
                                   quad_tol=args.quad_tol, cond_limit=args.sing_thresh)
    return {"x0_hat": x0, "samples": len(times), "input": u.describe()}, {}


def _gain_result(model, gain):
    cl = closed_loop(model, gain)
    result = gain.to_dict()
    result["closed_loop_eigenvalues"] = _eigs(mc.eigenvalues(cl.A))
    result["closed_loop_poly"] = list(characteristic_polynomial(cl.A).coefficients)
    return result


def cmd_deadbeat(model, args):
    gain = deadbeat_gain(model, cond_limit=args.sing_thresh)
    result = _gain_result(model, gain)
    result["nilpotency_residual"] = mc.norm_inf(mc.matrix_power(closed_loop(model, gain).A, model.n))
    return result, {}


def cmd_place(model, args):
    if args.poly:
        desired = CharPoly(tuple(parse_vector(args.poly)))
    else:
        try:
            roots = [complex(s.replace(" ", "")) for s in args.poles.split(",")]
        except ValueError:
            raise InputError(f"cannot parse poles {args.poles!r}") from None
        desired = CharPoly.from_roots(roots)
    return _gain_result(model, state_feedback_gain(model, desired, cond_limit=args.sing_thresh)), {}


def cmd_lqr(model, args):
    n, m = model.n, model.m
    if args.D is not None:
        R1 = output_weight(parse_matrix(args.D), parse_matrix(args.R3) if args.R3 else np.eye(parse_matrix(args.D).shape[0]))
    else:
        R1 = parse_matrix(args.R1) if args.R1 else np.eye(n)
    R = parse_matrix(args.R) if args.R else np.eye(m)
    P1 = parse_matrix(args.P1) if args.P1 else np.zeros((n, n))
    sol = lqr(model, R1, R, P1, args.i0, args.i1)
    result = sol.to_dict()
    result["weights"] = {"R1": R1, "R": R, "P1": P1}
    if args.x0:
        x0 = parse_vector(args.x0)
        result["x0"] = x0
        result["cost"] = sol.cost_of(x0)
    return result, {}


HANDLERS = {
    "simulate": cmd_simulate,
    "stability": cmd_stability,
    "ctrb-gramian": cmd_ctrb,
    "obsv-gramian": cmd_obsv,
    "steer": cmd_steer,
    "estimate-x0": cmd_estimate,
    "design-deadbeat": cmd_deadbeat,
    "design-place": cmd_place,
    "design-lqr": cmd_lqr,
}


# -- parser -------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--model", required=True, help="model JSON file")
    common.add_argument("--out", help="write the report here instead of stdout")
    common.add_argument("--reproducible", action="store_true", help="omit the timestamp")
    common.add_argument("--quad-tol", type=float, default=QUAD_TOL)
    common.add_argument("--sing-thresh", type=float, default=mc.COND_LIMIT,
                        help="condition-number limit for nonsingularity")

    parser = _Parser(prog="ltikit", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("simulate", parents=[common])
    p.add_argument("--x0")
    p.add_argument("--input", default="zero")
    p.add_argument("--t0", type=float, default=0.0)
    p.add_argument("--t1", type=float, required=True)
    p.add_argument("--steps", type=int, default=100)
    p.add_argument("--subintervals", type=int, default=8)
    p.add_argument("--csv")

    p = sub.add_parser("stability", parents=[common])
    p.add_argument("--u", help="constant input for the equilibrium (default ones)")
    p.add_argument("--P", help="Lyapunov matrix as JSON (default identity)")
    p.add_argument("--bibo-t-end", type=float)
    p.add_argument("--bibo-samples", type=int, default=101)
    p.add_argument("--bibo-csv")

    p = sub.add_parser("ctrb-gramian", parents=[common])
    p.add_argument("--t0", type=float, default=0.0)
    p.add_argument("--t1", type=float, required=True)

    p = sub.add_parser("obsv-gramian", parents=[common])
    p.add_argument("--t1", type=float, required=True)

    p = sub.add_parser("steer", parents=[common])
    p.add_argument("--x0")
    p.add_argument("--x1", required=True)
    p.add_argument("--t0", type=float, default=0.0)
    p.add_argument("--t1", type=float, required=True)
    p.add_argument("--grid", type=int, default=200)
    p.add_argument("--csv")

    p = sub.add_parser("estimate-x0", parents=[common])
    p.add_argument("--y", required=True, help="trajectory CSV with t and y columns")
    p.add_argument("--input", default="zero")
    p.add_argument("--t1", type=float, required=True)

    sub.add_parser("design-deadbeat", parents=[common])

    p = sub.add_parser("design-place", parents=[common])
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--poly", help="monic coefficients, highest degree first")
    g.add_argument("--poles", help="comma-separated poles, e.g. 0.5,0.2+0.1j,0.2-0.1j")

    p = sub.add_parser("design-lqr", parents=[common])
    p.add_argument("--R1")
    p.add_argument("--D")
    p.add_argument("--R3")
    p.add_argument("--R")
    p.add_argument("--P1")
    p.add_argument("--i0", type=int, default=0)
    p.add_argument("--i1", type=int, required=True)
    p.add_argument("--x0")
    return parser


def _flags(args) -> dict:
    skip = {"command", "model", "out", "reproducible"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


def run(argv=None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:  # argparse usage errors and --help
        return exc.code if isinstance(exc.code, int) else 1
    report = {
        "schema_version": SCHEMA_VERSION,
        "command": args.command,
        "inputs": {"model": Path(args.model).name, "flags": _flags(args)},
    }
    code = 0
    try:
        try:
            raw = Path(args.model).read_bytes()
        except OSError as exc:
            raise ParseError(f"cannot read model file: {exc}") from None
        report["inputs"]["model_sha256"] = digest(raw)
        model = parse_model(args.model)
        result, diag = HANDLERS[args.command](model, args)
        report["status"] = "ok"
        report["result"] = result
    except _Failure as f:
        report["status"] = "error"
        report["error"] = {"type": type(f.error).__name__, "message": str(f.error)}
        report["result"] = f.result
        code, diag = f.error.exit_code, {}
    except LtiError as exc:
        report["status"] = "error"
        report["error"] = {"type": type(exc).__name__, "message": str(exc)}
        code, diag = exc.exit_code, {}
    except Exception as exc:  # keep the exit-code contract for unexpected failures
        report["status"] = "error"
        report["error"] = {"type": type(exc).__name__, "message": str(exc)}
        code, diag = 2, {}
    report["diagnostics"] = {"quad_tol": args.quad_tol, "sing_thresh": args.sing_thresh, **diag}
    if not args.reproducible:
        report["timestamp"] = _dt.datetime.now(_dt.timezone.utc).isoformat()
    text = dumps(report)
    if args.out:
        Path(args.out).write_text(text, newline="\n")
    else:
        stdout.write(text)
    return code


def main(argv=None) -> None:
    sys.exit(run(argv))


if __name__ == "__main__":
    main()

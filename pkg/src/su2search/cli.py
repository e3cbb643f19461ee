"""Command-line interface: ``su2search {curve,plan,simulate,verify}``.

Curves go out as CSV (or JSON), reports as JSON. Floats carry 17 significant
digits. Exit codes: 0 success, 1 verification failure, 2 usage error,
3 numeric-domain error.

Any long option may also come from ``--config FILE``, a plain-text file of
``key = value`` lines (``#`` starts a comment; keys use the option name with or
without the leading dashes). Command-line flags override the file.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys

import numpy as np

from . import __version__
from .errors import FileFormatError, SearchError
from .matching import MatchingInputs, f_array, hoyer_point, matched_phi, matching_residual
from .ndim import (
    build_random_unitary,
    build_walsh_hadamard,
    extract_reduction,
    load_unitary,
    run_search,
    success_probability,
)
from .oracle import oracle_minimal_iterations, oracle_success
from .planner import final_phase, iteration_count, optimal_iterations, plan_search
from .reference import adjudicate, matches_reference
from .su2 import PhasePair, wrap_angle
from .verify import SUITES, run_suite

SCHEMA_VERSION = 1
EXIT_OK, EXIT_VERIFY, EXIT_USAGE, EXIT_DOMAIN = 0, 1, 2, 3
CURVE_HEADER = ("theta", "phi", "f", "w", "residual", "status")
ANGLE_KEYS = {
    "beta", "beta0", "alpha_plus_u", "alpha", "u", "global_phase", "phi", "theta",
    "delta", "oracle_delta", "w", "theta_min", "theta_max", "phase_error",
    "max_w_matched", "max_w_half_gap_check", "two_beta",
}


class UsageError(Exception):
    pass


# --- output ----------------------------------------------------------------


def fmt_float(x):
    if x is None or not math.isfinite(x):
        return "nan" if x is None or math.isnan(x) else ("inf" if x > 0 else "-inf")
    return format(x, ".17g")


def dumps(obj, indent=0):
    """JSON with floats at 17 significant digits; non-finite floats become null."""
    pad, inner = "  " * indent, "  " * (indent + 1)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{inner}{json.dumps(str(k))}: {dumps(v, indent + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        return "[\n" + ",\n".join(inner + dumps(v, indent + 1) for v in obj) + "\n" + pad + "]"
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return format(float(obj), ".17g") if math.isfinite(obj) else "null"
    if obj is None:
        return "null"
    return json.dumps(str(obj))


def _to_degrees(obj):
    if isinstance(obj, dict):
        return {
            k: (math.degrees(v) if k in ANGLE_KEYS and isinstance(v, float) else _to_degrees(v))
            for k, v in obj.items()
        }
    if isinstance(obj, list):
        return [_to_degrees(v) for v in obj]
    return obj


def _emit(args, text):
    if getattr(args, "output", None):
        with open(args.output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _emit_report(args, report):
    report = {"schema_version": SCHEMA_VERSION, **report}
    if args.degrees:
        report = _to_degrees(report)
    _emit(args, dumps(report) + "\n")


def _angle(args, value):
    return math.radians(value) if args.degrees else value


def _inputs(args):
    return MatchingInputs.from_angles(
        _angle(args, args.beta), _angle(args, args.beta0), _angle(args, args.alpha_plus_u)
    )


# --- curve -----------------------------------------------------------------


def curve_rows(inputs, thetas):
    rows = []
    hint = None
    for theta in thetas:
        theta = float(theta)
        try:
            phi = matched_phi(theta, inputs, hint=hint)
        except SearchError:
            hint = None
            rows.append({"theta": theta, "phi": math.nan, "f": math.nan, "w": math.nan,
                         "residual": math.nan, "status": "no_matched_phase"})
            continue
        hint = phi
        rows.append(_row(inputs, phi, theta, "ok"))
    return rows


def _row(inputs, phi, theta, status):
    f, w = f_array(np.array([theta]), np.array([phi]), inputs)
    res = matching_residual(PhasePair(phi, theta), inputs)
    f = float(f[0])
    if not math.isfinite(f):
        status = "degenerate"
    return {"theta": theta, "phi": phi, "f": f, "w": float(w[0]), "residual": res, "status": status}


def cmd_curve(args):
    if args.steps < 2:
        raise UsageError("--steps must be at least 2")
    lo = _angle(args, args.theta_min)
    hi = _angle(args, args.theta_max)
    if not 0.0 < lo < hi < 2 * math.pi:
        raise UsageError("need 0 < theta-min < theta-max < 2*pi")
    inputs = _inputs(args)
    rows = curve_rows(inputs, np.linspace(lo, hi, args.steps))
    cross = hoyer_point(inputs)
    if cross is not None and lo <= cross.theta <= hi:
        rows.append(_row(inputs, cross.phi, cross.theta, "hoyer"))
    if args.format == "json":
        echo = {"beta": inputs.beta, "beta0": inputs.beta0, "alpha_plus_u": inputs.alpha_plus_u,
                "theta_min": lo, "theta_max": hi, "steps": args.steps}
        _emit_report(args, {"command": "curve", "inputs": echo, "rows": rows})
        return EXIT_OK
    if args.degrees:
        for r in rows:
            for k in ("theta", "phi", "w"):
                r[k] = math.degrees(r[k])
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CURVE_HEADER)
    for r in rows:
        writer.writerow([fmt_float(r[k]) for k in CURVE_HEADER[:-1]] + [r["status"]])
    _emit(args, buf.getvalue())
    return EXIT_OK


# --- plan ------------------------------------------------------------------


def _plan_dict(plan):
    return {
        "phi": plan.phases.phi,
        "theta": plan.phases.theta,
        "m": plan.m,
        "delta": plan.delta,
        "f_value": plan.f_value,
        "predicted_success": plan.predicted_success,
        "exact": plan.exact,
        "winding": plan.winding,
        "alternatives": [{"phi": p.phi, "theta": p.theta} for p in plan.alternatives],
    }


def _oracle_fields(inputs, plan, oracle_max_m):
    succ, arg = oracle_success(plan.phases, inputs, plan.m)
    eq23_m = optimal_iterations(inputs)
    notes = []
    if oracle_max_m > 0:
        scan = oracle_minimal_iterations(inputs, m_max=oracle_max_m)
        oracle_m = scan.m
        if oracle_m is None:
            notes.append(f"oracle scan found no certain count up to m = {oracle_max_m}")
    else:
        oracle_m = None
        notes.append("oracle scan skipped")
    if oracle_m is not None and eq23_m != oracle_m:
        notes.append(
            f"closed-form optimal count at phi=theta=pi (m = {eq23_m}) differs from the oracle minimal m = {oracle_m}"
        )
    if plan.winding:
        notes.append(f"certainty reached on root index {plan.winding} of m w + gamma = pi/2 + n pi")
    if not plan.exact:
        notes.append(f"plan is not exact: predicted success {plan.predicted_success:.12f}")
    return {
        "oracle_success": succ,
        "oracle_delta": wrap_angle(arg),
        "eq23_m": eq23_m,
        "oracle_m": oracle_m,
    }, notes


def cmd_plan(args):
    inputs = _inputs(args)
    theta = None if args.theta is None else _angle(args, args.theta)
    plan = plan_search(inputs, theta=theta)
    fields, notes = _oracle_fields(inputs, plan, args.oracle_max_m)
    report = {
        "command": "plan",
        "status": "ok" if plan.exact else "inexact",
        "inputs": {
            "beta": inputs.beta,
            "beta0": inputs.beta0,
            "alpha_plus_u": inputs.alpha_plus_u,
            "strategy": "optimal" if theta is None else "fixed_theta",
            "theta": theta,
        },
        "plan": _plan_dict(plan),
        **fields,
    }
    if matches_reference(inputs.beta, inputs.beta0, inputs.alpha_plus_u):
        ref = adjudicate(inputs)
        report["reference_comparison"] = ref
        notes.extend(ref["notes"])
    report["discrepancy_notes"] = notes
    _emit_report(args, report)
    return EXIT_OK


# --- simulate --------------------------------------------------------------


def _build_unitary(args):
    if args.kind == "walsh":
        return build_walsh_hadamard(args.n)
    if args.kind == "random":
        return build_random_unitary(args.n, args.seed)
    if not args.unitary_file:
        raise UsageError("--unitary-file is required for kind 'file'")
    return load_unitary(args.unitary_file)


def _parse_phases(text, args):
    if text == "auto":
        return None
    try:
        phi, theta = (float(t) for t in text.split(","))
    except ValueError:
        raise UsageError(f"--phases must be 'auto' or PHI,THETA, got {text!r}") from None
    return PhasePair(_angle(args, phi), _angle(args, theta))


def cmd_simulate(args):
    U = _build_unitary(args)
    eta, tau = args.eta, args.tau
    if not (0 <= eta < U.dim and 0 <= tau < U.dim):
        raise UsageError(f"--eta and --tau must lie in [0, {U.dim})")
    u_eta = U.column(eta)
    if args.beta0 is None:
        s = u_eta
    else:
        overlap = u_eta[tau]
        basis = u_eta.copy()
        basis[tau] -= overlap
        basis /= np.linalg.norm(basis)
        b0, u = _angle(args, args.beta0), _angle(args, args.u)
        s = math.cos(b0) * np.exp(1j * u) * basis
        s[tau] += math.sin(b0)
    red = extract_reduction(U, eta, tau, s)
    inputs = MatchingInputs(red.geometry, red.initial)

    phases = _parse_phases(args.phases, args)
    notes = []
    plan = None
    if phases is None:
        plan = plan_search(inputs)
        phases = plan.phases
    m = None if args.m == "auto" else int(args.m)
    if m is None:
        m = plan.m if plan is not None else iteration_count(_f_for(phases, inputs))
    final = run_search(U, eta, tau, s, phases, m)
    amp = complex(final[tau])
    report = {
        "command": "simulate",
        "inputs": {"kind": args.kind, "N": U.dim, "eta": eta, "tau": tau, "seed": args.seed},
        "reduction": {"beta": red.beta, "alpha": red.alpha, "beta0": red.beta0, "u": red.u,
                      "global_phase": red.global_phase, "alpha_plus_u": inputs.alpha_plus_u},
    }
    predicted = None
    try:
        predicted = final_phase(m, phases, inputs)
    except (SearchError,) as exc:
        notes.append(f"no closed-form final phase: {exc}")
    plan_d = _plan_dict(plan) if plan is not None and plan.m == m else {"phi": phases.phi, "theta": phases.theta, "m": m}
    plan_d["delta"] = predicted
    success = success_probability(final, tau)
    oracle_delta = wrap_angle(math.atan2(amp.imag, amp.real))
    report.update(
        {
            "status": "ok" if success >= 1 - 1e-9 else "uncertain",
            "plan": plan_d,
            "oracle_success": success,
            "oracle_delta": oracle_delta,
            "phase_error": None if predicted is None else abs(math.remainder(oracle_delta - predicted, 2 * math.pi)),
            "eq23_m": optimal_iterations(inputs),
            "oracle_m": oracle_minimal_iterations(inputs, m_max=args.oracle_max_m).m if args.oracle_max_m else None,
        }
    )
    report["discrepancy_notes"] = notes
    _emit_report(args, report)
    return EXIT_OK


def _f_for(phases, inputs):
    from .matching import iteration_function_f

    return iteration_function_f(phases, inputs)


# --- verify ----------------------------------------------------------------


def cmd_verify(args):
    if args.samples < 1:
        raise UsageError("--samples must be at least 1")
    results = run_suite(args.suite, args.samples, args.seed, args.tol_scale)
    ok = all(r.passed for r in results)
    if args.format == "json":
        _emit(args, dumps({
            "schema_version": SCHEMA_VERSION,
            "command": "verify",
            "suite": args.suite,
            "samples": args.samples,
            "seed": args.seed,
            "passed": ok,
            "checks": [{"name": r.name, "passed": r.passed, "worst": r.worst, "tol": r.tol} for r in results],
        }) + "\n")
    else:
        lines = [f"{'PASS' if r.passed else 'FAIL'} {r.name} worst={fmt_float(r.worst)} tol={r.tol:g}" for r in results]
        lines.append("ALL PASS" if ok else "FAILURES")
        _emit(args, "\n".join(lines) + "\n")
    return EXIT_OK if ok else EXIT_VERIFY


# --- parser ----------------------------------------------------------------


def build_parser():
    parser = argparse.ArgumentParser(prog="su2search", description="Certainty quantum search toolkit.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, formats, default):
        p.add_argument("--config", help="key = value file supplying defaults for any option")
        p.add_argument("--format", choices=formats, default=default)
        p.add_argument("--degrees", action="store_true", help="angles in and out are in degrees")
        p.add_argument("--output", "-o", help="write to this file instead of stdout")

    def angles(p):
        p.add_argument("--beta", type=float, required=False)
        p.add_argument("--beta0", type=float, required=False)
        p.add_argument("--alpha-plus-u", type=float, default=0.0)

    p = sub.add_parser("curve", help="matched phi(theta) and f(theta) along a theta grid")
    angles(p)
    p.add_argument("--theta-min", type=float, default=1e-3)
    p.add_argument("--theta-max", type=float, default=2 * math.pi - 1e-3)
    p.add_argument("--steps", type=int, default=2000)
    common(p, ("csv", "json"), "csv")
    p.set_defaults(func=cmd_curve)

    p = sub.add_parser("plan", help="search plan with oracle verification")
    angles(p)
    p.add_argument("--theta", type=float, default=None, help="fix theta instead of optimizing")
    p.add_argument("--oracle-max-m", type=int, default=200, help="cap for the brute-force scan (0 skips it)")
    common(p, ("json",), "json")
    p.set_defaults(func=cmd_plan)

    p = sub.add_parser("simulate", help="N-dimensional statevector run")
    p.add_argument("kind", choices=("walsh", "random", "file"))
    p.add_argument("--n", type=int, default=2, help="qubits for walsh, dimension for random")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--unitary-file")
    p.add_argument("--eta", type=int, default=0)
    p.add_argument("--tau", type=int, default=0)
    p.add_argument("--beta0", type=float, default=None, help="start state angle (default: s = U|eta>)")
    p.add_argument("--u", type=float, default=0.0, help="start state relative phase")
    p.add_argument("--phases", default="auto", help="'auto' or PHI,THETA")
    p.add_argument("--m", default="auto", help="'auto' or an iteration count")
    p.add_argument("--oracle-max-m", type=int, default=50)
    common(p, ("json",), "json")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("verify", help="randomized property suites")
    p.add_argument("--suite", choices=SUITES + ("all",), default="all")
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tol-scale", type=float, default=1.0, help="multiply every tolerance (negative controls)")
    common(p, ("text", "json"), "text")
    p.set_defaults(func=cmd_verify)
    return parser, sub


_TRUE = {"1", "true", "yes", "on"}
_FALSE = {"0", "false", "no", "off"}


def read_config(path):
    values = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise UsageError(f"{path}:{lineno}: expected 'key = value'")
            key, value = (t.strip() for t in line.split("=", 1))
            values[key.lstrip("-").replace("-", "_")] = value
    return values


def _apply_config(subparser, path):
    known = {a.dest: a for a in subparser._actions}
    defaults = {}
    for key, value in read_config(path).items():
        action = known.get(key)
        if action is None or key in ("help", "config", "func"):
            raise UsageError(f"{path}: unknown option {key!r}")
        if isinstance(action, argparse._StoreTrueAction):
            low = value.lower()
            if low not in _TRUE | _FALSE:
                raise UsageError(f"{path}: {key} expects a boolean, got {value!r}")
            defaults[key] = low in _TRUE
        else:
            defaults[key] = value  # argparse converts string defaults through type=
        action.required = False
    subparser.set_defaults(**defaults)


def main(argv=None):
    parser, sub = build_parser()
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if args.config:
            _apply_config(sub.choices[args.command], args.config)
            args = parser.parse_args(argv)
        if args.command in ("curve", "plan") and (args.beta is None or args.beta0 is None):
            raise UsageError("--beta and --beta0 are required")
        return args.func(args)
    except SystemExit as exc:
        return int(exc.code or 0)
    except (UsageError, FileFormatError, OSError) as exc:
        print(f"su2search: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (SearchError, ValueError) as exc:
        print(f"su2search: numeric error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())

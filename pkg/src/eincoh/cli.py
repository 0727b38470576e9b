"""Command-line front end: ``eincoh <command> ...``.

Exit codes: 0 ok, 2 usage or input error, 3 indeterminable, 4 not certified,
5 numeric failure.
"""

from __future__ import annotations

import argparse
import json
import math
import re
import sys
from fractions import Fraction
from pathlib import Path
from typing import Any, Optional, Sequence

import numpy as np

from . import __version__
from .catalog import CatalogError, check_catalog, load_catalog, write_tables
from .dynamics import (
    DriftError,
    DynamicsError,
    FocusConditionError,
    IntegrationControls,
    NoSignChange,
    TrajectoryRecord,
    conservation_residual,
    phi_trajectory,
    shoot,
    theta_ivp,
)
from .exactpoly import format_rational
from .reconstruct import ReconstructionError, einstein_residuals, reconstruct_profile
from .thresholds import (
    DimensionError,
    StructuralTriple,
    VerdictTag,
    classify,
    discriminant_and_mu,
    threshold_report,
)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_INDETERMINABLE = 3
EXIT_NOT_CERTIFIED = 4
EXIT_NUMERIC = 5

_EXACT = re.compile(r"^\s*-?\d+(\s*/\s*\d+)?\s*$")
_DECIMAL = re.compile(r"^\s*-?(\d+\.?\d*|\.\d+)([eE][-+]?\d+)?\s*$")


class UsageError(ValueError):
    pass


def parse_exact(text: str) -> Fraction:
    if not _EXACT.match(text):
        raise UsageError(f"A must be an exact rational 'p/q' or integer, got {text!r}")
    try:
        return Fraction(text.replace(" ", ""))
    except ZeroDivisionError as exc:
        raise UsageError(f"zero denominator in {text!r}") from exc


def parse_lenient(text: str) -> Fraction:
    """Like parse_exact, but also takes decimals (with a warning on stderr)."""
    if _EXACT.match(text):
        return parse_exact(text)
    if _DECIMAL.match(text):
        value = Fraction(text.strip())
        print(f"warning: decimal A {text.strip()!r} read as {format_rational(value)}; "
              "pass p/q to make the input exact", file=sys.stderr)
        return value
    raise UsageError(f"cannot parse A = {text!r}")


def _emit(payload: Any) -> None:
    print(json.dumps(payload, indent=2, sort_keys=True))


def _write(path: str, text: str) -> None:
    p = Path(path)
    p.parent.mkdir(parents=True, exist_ok=True)
    p.write_text(text, encoding="utf-8")


def _triple(args, lenient: bool = False) -> StructuralTriple:
    A = parse_lenient(args.A) if lenient else parse_exact(args.A)
    try:
        return StructuralTriple(args.d1, args.d2, A)
    except DimensionError as exc:
        raise UsageError(str(exc)) from exc
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _controls(args) -> IntegrationControls:
    try:
        return IntegrationControls(rtol=args.rtol, atol=args.atol, eps=args.eps,
                                   horizon=args.horizon, drift_tol=args.drift_tol,
                                   endpoint_tol=args.endpoint_tol)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _render_table(rows: Sequence[Sequence[str]]) -> str:
    widths = [max(len(r[i]) for r in rows) for i in range(len(rows[0]))]
    return "\n".join("  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() for r in rows)


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_classify(args) -> int:
    triple = _triple(args)
    verdict = classify(triple)
    out = verdict.to_json()
    if args.numeric_second and verdict.tag == VerdictTag.EXISTENCE:
        try:
            res = theta_ivp(triple)
        except FocusConditionError as exc:
            out["theta_ivp"] = {"error": str(exc)}
        else:
            out["theta_ivp"] = res.to_json()
            if res.upgrade:
                out["verdict"] = VerdictTag.TWO_METRICS_NUMERIC.value
                out["evidence"].append({"predicate": "theta_limit < 3*pi/4",
                                        "lhs": repr(res.theta_limit),
                                        "rhs": repr(3 * math.pi / 4), "holds": True})
    if args.format == "table":
        rows = [("predicate", "lhs", "rhs", "holds")]
        rows += [(e["predicate"], e["lhs"] or "-", e["rhs"] or "-", str(e["holds"]))
                 for e in out["evidence"]]
        print(f"triple {triple}: {out['verdict']}")
        print(_render_table(rows))
    else:
        _emit(out)
    return EXIT_INDETERMINABLE if verdict.tag == VerdictTag.INDETERMINABLE else EXIT_OK


def cmd_thresholds(args) -> int:
    report = threshold_report(_triple(args))
    if args.format == "table":
        print(_render_table([("quantity", "exact", "approx")] + report.rows()))
    else:
        _emit(report.to_json())
    return EXIT_OK


def _profile_summary(profile, triple) -> dict:
    res = einstein_residuals(profile, triple)
    return {"t_star": profile.t_star, "Lambda": profile.Lambda, "start": profile.start_limits,
            "end": profile.end_limits, "residuals": res, "residual": max(res.values())}


def cmd_shoot(args) -> int:
    triple = _triple(args, lenient=True)
    controls = _controls(args)
    if discriminant_and_mu(triple).delta <= 0:
        print("warning: Delta <= 0, the point p1 is not real and no heterocline is expected",
              file=sys.stderr)
    payload = {"triple": str(triple), "controls": controls.to_json()}
    try:
        result = shoot(triple, controls, samples=args.samples)
    except NoSignChange as exc:
        payload.update(certified=False, reason="no sign change of the objective",
                       history=[[s, None if math.isnan(g) else g] for s, g in exc.history])
        _emit(payload)
        return EXIT_NOT_CERTIFIED
    except DriftError as exc:
        print(f"error: conservation drift {exc.max_drift:.3e} > {exc.tol:.1e} "
              f"at eta = {exc.eta:.6g}", file=sys.stderr)
        return EXIT_NUMERIC
    payload.update(result.to_json())
    if args.out:
        _write(args.out, result.heterocline.to_csv())
    try:
        profile = reconstruct_profile(result.heterocline, triple, args.Lambda)
        payload["profile"] = _profile_summary(profile, triple)
        if args.profile:
            _write(args.profile, profile.to_csv())
    except ReconstructionError as exc:
        payload["profile"] = {"error": str(exc)}
    _emit(payload)
    return EXIT_OK if result.certified else EXIT_NOT_CERTIFIED


def cmd_theta(args) -> int:
    triple = _triple(args)
    try:
        res = theta_ivp(triple, horizon=args.horizon, window=args.window)
    except FocusConditionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    _emit({"triple": str(triple), **res.to_json()})
    return EXIT_OK


def read_trajectory_csv(path: str, triple: StructuralTriple) -> TrajectoryRecord:
    """Read a trajectory CSV as written by ``shoot --out``; tau is recovered
    by Simpson quadrature of sqrt((1 - H^2)/n) over the samples."""
    from scipy.integrate import cumulative_simpson

    try:
        data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    except (OSError, ValueError) as exc:
        raise UsageError(f"cannot read trajectory {path}: {exc}") from exc
    if data.shape[1] < 5 or data.shape[0] < 7:
        raise UsageError("trajectory CSV needs columns eta,X1,X2,Y,Z and at least 7 rows")
    eta, states = data[:, 0], data[:, 1:5].T
    H = triple.d1 * states[0] + triple.d2 * states[1]
    speed = np.sqrt(np.clip((1.0 - H * H) / triple.n, 0.0, None))
    tau = cumulative_simpson(speed, x=eta, initial=0.0)
    drift = float(np.max(np.abs(conservation_residual(states, triple))))
    return TrajectoryRecord(triple, eta, states, tau, [], 0, False, drift, "csv")


def cmd_reconstruct(args) -> int:
    triple = _triple(args, lenient=True)
    if bool(args.trajectory) == bool(args.phi):
        raise UsageError("give exactly one of --trajectory FILE or --phi")
    traj = phi_trajectory(triple) if args.phi else read_trajectory_csv(args.trajectory, triple)
    profile = reconstruct_profile(traj, triple, args.Lambda)
    if args.out:
        _write(args.out, profile.to_csv())
    _emit({"triple": str(triple), **_profile_summary(profile, triple)})
    return EXIT_OK


def cmd_catalog(args) -> int:
    records = load_catalog(args.catalog)
    status = EXIT_OK
    if args.check:
        checks = check_catalog(records, workers=args.workers)
        bad = [c for c in checks if not c.ok]
        for c in checks:
            mark = "ok  " if c.ok else "FAIL"
            exp = c.expected.value if c.expected else "-"
            print(f"{mark} {c.name:40s} {str(c.triple):32s} {c.verdict.value:24s} expected {exp}")
            for p in c.problems:
                print(f"     {p}")
        print(f"{len(checks) - len(bad)}/{len(checks)} records consistent")
        if bad:
            status = EXIT_NOT_CERTIFIED
    if args.emit_tables:
        for p in write_tables(records, args.outdir):
            print(f"wrote {p}")
    if not (args.check or args.emit_tables):
        _emit([r.to_json() for r in records])
    return status


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def _add_triple(p: argparse.ArgumentParser, decimals: bool = False) -> None:
    p.add_argument("--d1", type=int, required=True, help="dimension of the collapsing summand")
    p.add_argument("--d2", type=int, required=True, help="dimension of the second summand")
    help_a = "coupling A as p/q" + (" (decimals accepted with a warning)" if decimals else "")
    p.add_argument("--A", required=True, help=help_a)


def _add_controls(p: argparse.ArgumentParser) -> None:
    d = IntegrationControls()
    p.add_argument("--rtol", type=float, default=d.rtol, help="relative tolerance (default %(default)g)")
    p.add_argument("--atol", type=float, default=d.atol, help="absolute tolerance (default %(default)g)")
    p.add_argument("--eps", type=float, default=d.eps,
                   help="offset from p0+ along the unstable manifold (default %(default)g)")
    p.add_argument("--horizon", type=float, default=d.horizon, help="eta horizon (default %(default)g)")
    p.add_argument("--drift-tol", type=float, default=d.drift_tol,
                   help="allowed conservation drift (default %(default)g)")
    p.add_argument("--endpoint-tol", type=float, default=d.endpoint_tol,
                   help="allowed distance of the glued end from p0- (default %(default)g)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="eincoh",
        description="Cohomogeneity one Einstein metrics on two-summands double disk bundles.",
        epilog="exit codes: 0 ok, 2 usage, 3 indeterminable, 4 not certified, 5 numeric failure")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", help="exact verdict for a structural triple")
    _add_triple(p)
    p.add_argument("--numeric-second", action="store_true",
                   help="on Existence, run the theta IVP and possibly upgrade to TwoMetricsNumeric")
    p.add_argument("--format", choices=("json", "table"), default="json")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("thresholds", help="all exact thresholds for a triple")
    _add_triple(p)
    p.add_argument("--format", choices=("json", "table"), default="json")
    p.set_defaults(func=cmd_thresholds)

    p = sub.add_parser("shoot", help="shoot for the heterocline and reconstruct the metric")
    _add_triple(p, decimals=True)
    _add_controls(p)
    p.add_argument("--samples", type=int, default=20001, help="resampled points per half (default %(default)s)")
    p.add_argument("--Lambda", type=float, default=None, help="Einstein constant (default n-1)")
    p.add_argument("--out", help="write the heterocline CSV here")
    p.add_argument("--profile", help="write the metric profile CSV here")
    p.set_defaults(func=cmd_shoot)

    p = sub.add_parser("theta", help="theta initial value problem for the second metric")
    _add_triple(p)
    p.add_argument("--horizon", type=float, default=400.0, help="eta horizon (default %(default)g)")
    p.add_argument("--window", type=float, default=20.0, help="stabilization window (default %(default)g)")
    p.set_defaults(func=cmd_theta)

    p = sub.add_parser("reconstruct", help="metric profile from a phase-space trajectory")
    _add_triple(p, decimals=True)
    p.add_argument("--trajectory", help="trajectory CSV written by shoot --out")
    p.add_argument("--phi", action="store_true", help="use the sine-cone trajectory on Phi")
    p.add_argument("--Lambda", type=float, default=None, help="Einstein constant (default n-1)")
    p.add_argument("--out", help="write the profile CSV here")
    p.set_defaults(func=cmd_reconstruct)

    p = sub.add_parser("catalog", help="check the orbit catalog or regenerate its tables")
    p.add_argument("--catalog", default=None,
                   help="catalog JSON (default: $EINCOH_CATALOG, then the shipped resource)")
    p.add_argument("--check", action="store_true", help="verify A values and verdicts")
    p.add_argument("--emit-tables", action="store_true", help="write one text table per tag")
    p.add_argument("--outdir", default="tables", help="directory for --emit-tables (default %(default)s)")
    p.add_argument("--workers", type=int, default=1, help="worker processes for --check")
    p.set_defaults(func=cmd_catalog)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.func(args)
    except (UsageError, CatalogError, DimensionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DynamicsError, ReconstructionError, FloatingPointError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())

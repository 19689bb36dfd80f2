"""Command-line front end writing CSV data and JSON reports.

Every file written is accompanied by ``<file>.manifest.json`` recording the
resolved arguments; ``qfilqu replay <manifest>`` regenerates the output.

Exit codes: 0 success, 1 invalid input, 2 an embedded check failed.
"""
import argparse
import csv
import datetime
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .bounds import PRNG_NAME, ScanConfig, extremize_deltas, monte_carlo_scan
from .correlations import lqu_closed
from .dynamics import DegenerateStateError, InitialCondition, ModelParams, propagate
from .metrology import qfi_closed
from .oracle import compare_oracles

EXIT_OK, EXIT_INPUT, EXIT_CHECK = 0, 1, 2

PSEUDOMODE_TOL = 1e-6
BATH_TOL = 5e-2
SLACK = 1e-12
SUPREMUM_SLACK = 1e-9

_CONSTRAINT_NAMES = {"j-zero": "j_zero", "bell": "bell_init", "free": "unconstrained"}


class InputError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _fmt(value):
    if isinstance(value, (int, np.integer)) and not isinstance(value, bool):
        return str(value)
    return "%.17g" % value


def _write_csv(path, header, rows):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(v) for v in row])


def _json_text(obj):
    return json.dumps(obj, indent=2, sort_keys=True, allow_nan=True) + "\n"


def _write_json(path, obj):
    Path(path).write_text(_json_text(obj), encoding="utf-8")


def _write_manifest(out, args, argv, outputs, seed=None):
    manifest = {
        "command": args.command,
        "argv": argv,
        "parameters": {k: v for k, v in sorted(vars(args).items()) if k not in ("func", "command", "out")},
        "seed": seed,
        "tool_version": __version__,
        "timestamp": datetime.datetime.now(datetime.timezone.utc).isoformat(),
        "outputs": [str(p) for p in outputs],
    }
    _write_json(f"{out}.manifest.json", manifest)


def _resolved_argv(args, flags):
    """Canonical argv reproducing ``args`` (flag, attribute) pairs in ``flags``."""
    argv = [args.command]
    for flag, attr in flags:
        value = getattr(args, attr)
        argv += [flag, repr(value) if isinstance(value, float) else str(value)]
    return argv


def _nonneg(name, value):
    if not (math.isfinite(value) and value >= 0):
        raise InputError(f"{name} must be a non-negative number, got {value}")


def _positive(name, value):
    if not (math.isfinite(value) and value > 0):
        raise InputError(f"{name} must be positive, got {value}")


def _init_from_a0(a0, theta):
    if not (math.isfinite(a0) and abs(a0) <= 1.0):
        raise InputError(f"|a0| must not exceed 1, got {a0}")
    return InitialCondition(a0, math.sqrt(1.0 - a0 * a0), theta)


# ---------------------------------------------------------------- timeseries

_TIMESERIES_FLAGS = [
    ("--gamma0", "gamma0"),
    ("--lambda", "lam"),
    ("--J", "J"),
    ("--a0", "a0"),
    ("--theta", "theta"),
    ("--t-max", "t_max"),
    ("--t-steps", "t_steps"),
]


def timeseries_rows(args):
    """Rows ``(t, qfi, lqu, w1, w2, abs_x_sq)``; rates and times in units of gamma0."""
    _positive("--gamma0", args.gamma0)
    _positive("--lambda", args.lam)
    _nonneg("--J", args.J)
    _nonneg("--t-max", args.t_max)
    if args.t_steps < 1:
        raise InputError("--t-steps must be at least 1")
    init = _init_from_a0(args.a0, args.theta)
    g = args.gamma0
    params = ModelParams(g, args.lam * g, args.J * g)
    scaled = [0.0] if args.t_max == 0 else np.linspace(0.0, args.t_max, args.t_steps)
    rows = []
    for tau in scaled:
        t = float(tau) / g
        state = propagate(params, init, t)
        qfi = qfi_closed(init, state.x).value
        try:
            lqu = lqu_closed(state)
            lqu_value, w1, w2 = lqu.value, lqu.w1, lqu.w2
        except DegenerateStateError as err:
            lqu_value, w1, w2 = err.value, float("nan"), float("nan")
        rows.append((t, qfi, lqu_value, w1, w2, abs(state.x) ** 2))
    return rows


def cmd_timeseries(args):
    rows = timeseries_rows(args)
    _write_csv(args.out, ["t", "qfi", "lqu", "w1", "w2", "abs_x_sq"], rows)
    _write_manifest(args.out, args, _resolved_argv(args, _TIMESERIES_FLAGS), [args.out])
    return EXIT_OK


# ---------------------------------------------------------------------- scan

_SCAN_FLAGS = [("--n", "n"), ("--seed", "seed"), ("--constraint", "constraint")]

SCAN_HEADER = ["index", "lambda", "J", "t", "a0", "theta", "qfi", "lqu", "delta1", "delta2", "degenerate"]


def scan_summary(samples, constraint, n, seed):
    d1 = np.array([s.delta1 for s in samples])
    d2 = np.array([s.delta2 for s in samples])
    summary = {
        "n_samples": n,
        "seed": seed,
        "constraint": constraint,
        "prng": PRNG_NAME,
        "min_delta1": float(d1.min()),
        "max_delta1": float(d1.max()),
        "min_delta2": float(d2.min()),
        "max_delta2": float(d2.max()),
        "delta2_violations": int(np.sum(d2 < -SLACK)),
        "degenerate_samples": int(sum(s.degenerate for s in samples)),
    }
    checks = {}
    if constraint in ("j_zero", "bell_init"):
        checks["lqu_le_qfi"] = summary["min_delta1"] >= -SLACK
    if constraint == "j_zero":
        checks["max_delta1_le_quarter"] = summary["max_delta1"] <= 0.25 + SUPREMUM_SLACK
        checks["qfi_le_2lqu"] = summary["min_delta2"] >= -SLACK
        checks["max_delta2_le_one"] = summary["max_delta2"] <= 1.0 + SUPREMUM_SLACK
    summary["checks"] = checks
    summary["passed"] = all(checks.values())
    return summary


def cmd_scan(args):
    if args.n < 1:
        raise InputError("--n must be at least 1")
    if not 0 <= args.seed < 2**64:
        raise InputError("--seed must be a 64-bit unsigned integer")
    constraint = _CONSTRAINT_NAMES[args.constraint]
    samples = monte_carlo_scan(ScanConfig(args.n, args.seed, constraint))
    rows = [
        (
            i,
            s.params.lam,
            s.params.J,
            s.t,
            float(np.real(s.init.a0)),
            s.init.theta,
            s.qfi,
            s.lqu,
            s.delta1,
            s.delta2,
            int(s.degenerate),
        )
        for i, s in enumerate(samples)
    ]
    _write_csv(args.out, SCAN_HEADER, rows)
    summary = scan_summary(samples, constraint, args.n, args.seed)
    summary_path = f"{args.out}.summary.json"
    _write_json(summary_path, summary)
    _write_manifest(args.out, args, _resolved_argv(args, _SCAN_FLAGS), [args.out, summary_path], seed=args.seed)
    return EXIT_OK if summary["passed"] else EXIT_CHECK


# -------------------------------------------------------------- check-bounds

def check_bounds_report(resolution):
    if resolution < 2:
        raise InputError("--grid-resolution must be at least 2")
    report = extremize_deltas(resolution)
    report["checks"] = {
        # proven bounds: a failure is a defect
        "max_delta1_le_quarter": report["max_delta1"] <= 0.25 + SUPREMUM_SLACK,
        "min_delta2_nonneg": report["min_delta2_all"] >= -SLACK,
    }
    # attainment depends on the grid reaching (m, n) = (5/8, 4/5)
    report["max_delta1_attained"] = abs(report["max_delta1"] - 0.25) <= 1e-4
    report["passed"] = all(report["checks"].values())
    return report


def _emit_report(args, report, argv):
    if args.out:
        _write_json(args.out, report)
        _write_manifest(args.out, args, argv, [args.out])
    else:
        sys.stdout.write(_json_text(report))


def cmd_check_bounds(args):
    report = check_bounds_report(args.grid_resolution)
    _emit_report(args, report, _resolved_argv(args, [("--grid-resolution", "grid_resolution")]))
    return EXIT_OK if report["passed"] else EXIT_CHECK


# ------------------------------------------------------------- oracle-verify

_ORACLE_FLAGS = [
    ("--lambda", "lam"),
    ("--J", "J"),
    ("--a0", "a0"),
    ("--theta", "theta"),
    ("--t-max", "t_max"),
    ("--t-points", "t_points"),
    ("--dt", "dt"),
    ("--n-modes", "n_modes"),
    ("--window-mult", "window_mult"),
]


def oracle_report(args):
    _positive("--lambda", args.lam)
    _nonneg("--J", args.J)
    _nonneg("--t-max", args.t_max)
    _positive("--dt", args.dt)
    _positive("--window-mult", args.window_mult)
    if args.n_modes < 1 or args.t_points < 1:
        raise InputError("--n-modes and --t-points must be positive")
    init = _init_from_a0(args.a0, args.theta)
    params = ModelParams(1.0, args.lam, args.J)
    grid = [0.0] if args.t_max == 0 else np.linspace(0.0, args.t_max, args.t_points)
    # the bath step must also resolve the largest detuning
    bath_dt = min(args.dt, 0.05 / (args.window_mult * args.lam))
    result = compare_oracles(params, init, grid, args.dt, args.n_modes, args.window_mult, bath_dt=bath_dt)
    checks = {
        "pseudomode": result.max_error("analytic_vs_pseudomode") < PSEUDOMODE_TOL,
        "bath": result.max_error("analytic_vs_bath") < BATH_TOL,
    }
    return {
        "errors": result.errors,
        "thresholds": {"pseudomode": PSEUDOMODE_TOL, "bath": BATH_TOL},
        "checks": checks,
        "passed": all(checks.values()),
    }


def cmd_oracle_verify(args):
    report = oracle_report(args)
    _emit_report(args, report, _resolved_argv(args, _ORACLE_FLAGS))
    return EXIT_OK if report["passed"] else EXIT_CHECK


# -------------------------------------------------------------------- replay

def cmd_replay(args):
    try:
        manifest = json.loads(Path(args.manifest).read_text(encoding="utf-8"))
        argv = list(manifest["argv"])
    except (OSError, ValueError, KeyError) as err:
        raise InputError(f"cannot read manifest {args.manifest}: {err}") from err
    out = args.out or manifest["outputs"][0]
    return main(argv + ["--out", str(out)])


def build_parser():
    parser = _Parser(prog="qfilqu", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"qfilqu {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("timeseries", help="QFI and LQU against time")
    p.add_argument("--gamma0", type=float, default=1.0)
    p.add_argument("--lambda", dest="lam", type=float, default=0.1)
    p.add_argument("--J", type=float, default=1.5)
    p.add_argument("--a0", type=float, default=1.0 / math.sqrt(2.0))
    p.add_argument("--theta", type=float, default=0.0)
    p.add_argument("--t-max", type=float, default=20.0)
    p.add_argument("--t-steps", type=int, default=201)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_timeseries)

    p = sub.add_parser("scan", help="random-parameter scan of QFI - LQU differences")
    p.add_argument("--n", type=int, default=10_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--constraint", choices=sorted(_CONSTRAINT_NAMES), default="j-zero")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("check-bounds", help="grid extremization of the decoupled-qubit differences")
    p.add_argument("--grid-resolution", type=int, default=2001)
    p.add_argument("--out")
    p.set_defaults(func=cmd_check_bounds)

    p = sub.add_parser("oracle-verify", help="compare the exact amplitudes with two ODE solvers")
    p.add_argument("--lambda", dest="lam", type=float, default=0.15)
    p.add_argument("--J", type=float, default=1.5)
    p.add_argument("--a0", type=float, default=1.0 / math.sqrt(2.0))
    p.add_argument("--theta", type=float, default=0.0)
    p.add_argument("--t-max", type=float, default=10.0)
    p.add_argument("--t-points", type=int, default=201)
    p.add_argument("--dt", type=float, default=1e-3)
    p.add_argument("--n-modes", type=int, default=4000)
    p.add_argument("--window-mult", type=float, default=40.0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_oracle_verify)

    p = sub.add_parser("replay", help="re-run the command recorded in a manifest")
    p.add_argument("manifest")
    p.add_argument("--out")
    p.set_defaults(func=cmd_replay)
    return parser


def main(argv=None):
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        # usage errors and --help/--version return their code instead of exiting
        return exc.code if isinstance(exc.code, int) else EXIT_INPUT
    try:
        return args.func(args)
    except (InputError, ValueError) as err:
        print(f"qfilqu {args.command}: error: {err}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())

"""Command-line front end.

Exit codes: 0 success, 1 I/O failure, 2 invalid arguments, 3 optimizer
failure, 4 verification failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import shlex
import sys
from concurrent.futures import ProcessPoolExecutor

from . import __version__
from .constrained import (
    OptimizationError,
    curzon_ahlborn,
    maximize_expected_work,
    work_ratio,
    zhang_efficiency,
)
from .engine import BathPair, DomainError, EngineConfig, cycle, is_engine
from .expectations import expect_heats, expected_efficiency
from .oracle import QUANTITIES, WORKERS_ENV, draw_pairs, mc_expectation
from .priors import Observer, PriorSupport
from .verify import LEVELS, run_checks

EXIT_IO, EXIT_USAGE, EXIT_OPTIMIZER, EXIT_VERIFY = 1, 2, 3, 4

CURVES = ("expected_efficiency", "ca", "zhang", "work_ratio", "heats")


class UsageError(Exception):
    pass


def _fmt(x: float) -> str:
    return f"{x:.11e}"


def _emit_json(obj, out):
    try:
        text = json.dumps(obj, allow_nan=False, sort_keys=False)
    except ValueError as exc:
        raise DomainError(f"non-finite value in output: {exc}") from None
    out.write(text + "\n")


def _add_baths(p):
    p.add_argument("--t1", type=float, default=1.0, help="hot bath temperature")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--theta", type=float, help="t_cold / t_hot (default 0.5)")
    g.add_argument("--t2", type=float, help="cold bath temperature")


def _add_support(p):
    p.add_argument("--amin", type=float, help="lower spacing bound (default 1e-6*t2)")
    p.add_argument("--amax", type=float, help="upper spacing bound (default 1e6*t1)")


def _baths(args) -> BathPair:
    if args.t2 is not None:
        return BathPair(args.t1, args.t2)
    return BathPair.from_theta(args.t1, 0.5 if args.theta is None else args.theta)


def _support(args, baths: BathPair) -> PriorSupport:
    default = PriorSupport.asymptotic(baths.t_hot, baths.t_cold)
    lo = default.a_min if args.amin is None else args.amin
    hi = default.a_max if args.amax is None else args.amax
    return PriorSupport(lo, hi)


# --- eval -------------------------------------------------------------------


def cmd_eval(args, out):
    baths = _baths(args)
    cfg = EngineConfig(args.a1, args.a2)
    q = cycle(cfg, baths)
    # adding 0.0 turns a signed zero into plain 0
    outputs = {**{k: v + 0.0 for k, v in q.as_dict().items()},
               "is_engine": is_engine(cfg, baths)}
    if args.json:
        _emit_json({
            "inputs": {"a1": cfg.a1, "a2": cfg.a2, "t1": baths.t_hot, "t2": baths.t_cold,
                       "theta": baths.theta},
            "outputs": outputs,
            "provenance": {k: "closed_form" for k in outputs},
        }, out)
    else:
        width = max(map(len, outputs))
        for k, v in outputs.items():
            val = str(v).lower() if isinstance(v, bool) else f"{v:.12g}"
            out.write(f"{k:<{width}}  {val}\n")
    return 0


# --- sweep ------------------------------------------------------------------


def _columns(curves):
    cols = []
    for c in curves:
        cols.extend(("heat_hot", "heat_cold") if c == "heats" else (c,))
    return cols


def _row(task):
    theta, curves, t1, amin, amax, ratio_eff = task
    baths = BathPair.from_theta(t1, theta)
    support = PriorSupport(
        1e-6 * baths.t_cold if amin is None else amin,
        1e6 * baths.t_hot if amax is None else amax,
    )
    row = [theta]
    for c in curves:
        if c == "expected_efficiency":
            row.append(expected_efficiency(theta))
        elif c == "ca":
            row.append(curzon_ahlborn(theta))
        elif c == "zhang":
            row.append(zhang_efficiency(theta))
        elif c == "work_ratio":
            row.append(work_ratio(theta, support, baths, efficiency=ratio_eff))
        elif c == "heats":
            q1, q2 = expect_heats(Observer.A, baths, support, route="asymptotic")
            row.extend((q1.value, q2.value))
    return row


def _provenance(curves):
    routes = {"expected_efficiency": "asymptotic", "ca": "closed_form",
              "zhang": "closed_form", "work_ratio": "asymptotic"}
    prov = {}
    for c in _columns(curves):
        prov[c] = routes.get(c, "asymptotic")
    return prov


def _workers():
    try:
        return max(1, int(os.environ.get(WORKERS_ENV, "1")))
    except ValueError:
        raise UsageError(f"{WORKERS_ENV} must be an integer") from None


def cmd_sweep(args, out, argv):
    curves = [c.strip() for c in args.curves.split(",") if c.strip()]
    unknown = sorted(set(curves) - set(CURVES))
    if unknown or not curves:
        raise UsageError(f"unknown curves {unknown}; choose from {', '.join(CURVES)}")
    if not 0 < args.theta_start < args.theta_end < 1:
        raise UsageError("need 0 < theta-start < theta-end < 1")
    if args.steps < 2:
        raise UsageError("steps must be at least 2")
    if args.t1 <= 0 or not math.isfinite(args.t1):
        raise UsageError("t1 must be positive")
    n = args.steps
    span = args.theta_end - args.theta_start
    thetas = [args.theta_start + span * k / (n - 1) for k in range(n)]
    thetas[-1] = args.theta_end
    tasks = [(th, curves, args.t1, args.amin, args.amax, args.ratio_efficiency)
             for th in thetas]

    workers = _workers()
    if workers > 1:
        with ProcessPoolExecutor(workers) as pool:
            rows = list(pool.map(_row, tasks))
    else:
        rows = [_row(t) for t in tasks]

    cols = ["theta"] + _columns(curves)
    if args.json:
        _emit_json({
            "inputs": {k: v for k, v in vars(args).items() if k not in ("func", "output")},
            "outputs": {c: [r[i] for r in rows] for i, c in enumerate(cols)},
            "provenance": _provenance(curves),
        }, out)
        return 0

    buf = io.StringIO(newline="")
    buf.write("# swapengine " + shlex.join(argv) + "\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(cols)
    for r in rows:
        w.writerow([_fmt(x) for x in r])
    text = buf.getvalue()
    if args.output:
        try:
            with open(args.output, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
        except OSError as exc:
            print(f"error: cannot write {args.output}: {exc}", file=sys.stderr)
            return EXIT_IO
    else:
        out.write(text)
    return 0


# --- optimize ---------------------------------------------------------------


def cmd_optimize(args, out):
    baths = _baths(args)
    support = _support(args, baths)
    try:
        eta, w = maximize_expected_work(baths, support)
    except OptimizationError as exc:
        print(f"optimizer failed: {exc}", file=sys.stderr)
        return EXIT_OPTIMIZER
    ca = curzon_ahlborn(baths.theta)
    outputs = {"eta_star": eta, "w_star": w, "eta_ca": ca, "gap": abs(eta - ca)}
    if args.json:
        _emit_json({
            "inputs": {"t1": baths.t_hot, "t2": baths.t_cold, "theta": baths.theta,
                       "amin": support.a_min, "amax": support.a_max},
            "outputs": outputs,
            "provenance": {"eta_star": "golden_section", "w_star": "asymptotic",
                           "eta_ca": "closed_form", "gap": "derived"},
        }, out)
    else:
        for k, v in outputs.items():
            out.write(f"{k:<8}  {v:.12g}\n")
    return 0


# --- verify -----------------------------------------------------------------


def cmd_verify(args, out):
    results = run_checks(args.level, args.tolerance_scale)
    failed = [r for r in results if not r.passed]
    if args.json:
        _emit_json({
            "inputs": {"level": args.level, "mc_samples": LEVELS[args.level]},
            "outputs": {"checks": [r.as_dict() for r in results],
                        "passed": not failed},
            "provenance": {"checks": "verify"},
        }, out)
    else:
        width = max(len(r.name) for r in results)
        for r in results:
            tag = "PASS" if r.passed else "FAIL"
            line = f"{tag}  {r.name:<{width}}  {r.measured:.3e} <= {r.tolerance:.3e}"
            if r.note:
                line += f"  ({r.note})"
            out.write(line + "\n")
        out.write(f"{len(results) - len(failed)}/{len(results)} checks passed\n")
    return EXIT_VERIFY if failed else 0


# --- sample -----------------------------------------------------------------


def cmd_sample(args, out):
    import numpy as np

    baths = _baths(args)
    support = _support(args, baths)
    obs = Observer(args.observer)
    if args.n < 1:
        raise UsageError("n must be positive")
    if args.quantity:
        r = mc_expectation(args.quantity, obs, baths, support, args.n, args.seed)
        outputs = {"mean": r.mean, "std_error": r.std_error, "n_samples": r.n_samples,
                   "seed": r.seed}
        if args.json:
            _emit_json({
                "inputs": {"quantity": args.quantity, "observer": obs.value,
                           "t1": baths.t_hot, "t2": baths.t_cold,
                           "amin": support.a_min, "amax": support.a_max},
                "outputs": outputs,
                "provenance": {"mean": "monte_carlo", "std_error": "monte_carlo"},
            }, out)
        else:
            for k, v in outputs.items():
                out.write(f"{k:<9}  {v:.12g}\n" if isinstance(v, float) else f"{k:<9}  {v}\n")
        return 0

    rng = np.random.default_rng(np.random.SeedSequence(args.seed))
    a1, a2 = draw_pairs(obs, baths.theta, support, rng, args.n)
    if args.json:
        _emit_json({
            "inputs": {"observer": obs.value, "n": args.n, "seed": args.seed,
                       "t1": baths.t_hot, "t2": baths.t_cold,
                       "amin": support.a_min, "amax": support.a_max},
            "outputs": {"a1": a1.tolist(), "a2": a2.tolist()},
            "provenance": {"a1": "inverse_cdf", "a2": "inverse_cdf"},
        }, out)
        return 0
    w = csv.writer(out, lineterminator="\n")
    w.writerow(["a1", "a2"])
    for x, y in zip(a1, a2):
        w.writerow([_fmt(x), _fmt(y)])
    return 0


# --- parser -----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="swapengine",
        description="Two-qubit swap engine under scale-invariant prior ignorance.",
    )
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    e = sub.add_parser("eval", help="one cycle at fixed spacings")
    e.add_argument("--a1", type=float, required=True)
    e.add_argument("--a2", type=float, required=True)
    _add_baths(e)
    e.add_argument("--json", action="store_true")

    s = sub.add_parser("sweep", help="CSV of curves over a theta grid")
    s.add_argument("--theta-start", type=float, default=0.01)
    s.add_argument("--theta-end", type=float, default=0.99)
    s.add_argument("--steps", type=int, default=99)
    s.add_argument("--curves", default="expected_efficiency",
                   help=f"comma-separated subset of {', '.join(CURVES)}")
    s.add_argument("--t1", type=float, default=1.0)
    _add_support(s)
    s.add_argument("--ratio-efficiency", choices=("expected", "ca"), default="expected",
                   help="efficiency at which the fixed-efficiency work is evaluated")
    s.add_argument("-o", "--output", help="write CSV here instead of stdout")
    s.add_argument("--json", action="store_true")

    o = sub.add_parser("optimize", help="maximize wide-support work over efficiency")
    _add_baths(o)
    _add_support(o)
    o.add_argument("--json", action="store_true")

    v = sub.add_parser("verify", help="run the invariant checks")
    v.add_argument("--level", choices=tuple(LEVELS), default="fast")
    v.add_argument("--tolerance-scale", type=float, default=1.0, help=argparse.SUPPRESS)
    v.add_argument("--json", action="store_true")

    m = sub.add_parser("sample", help="prior draws, or a Monte Carlo expectation")
    m.add_argument("--observer", choices=("A", "B"), default="A")
    m.add_argument("--n", type=int, default=10_000)
    m.add_argument("--seed", type=int, default=0)
    m.add_argument("--quantity", choices=sorted(QUANTITIES))
    _add_baths(m)
    _add_support(m)
    m.add_argument("--json", action="store_true")
    return p


def main(argv=None, out=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if args.command == "eval":
            return cmd_eval(args, out)
        if args.command == "sweep":
            return cmd_sweep(args, out, argv)
        if args.command == "optimize":
            return cmd_optimize(args, out)
        if args.command == "verify":
            return cmd_verify(args, out)
        return cmd_sample(args, out)
    except (DomainError, UsageError) as exc:
        parser.print_usage(sys.stderr)
        print(f"swapengine {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())

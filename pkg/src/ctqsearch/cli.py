"""Command-line interface: simulate, limit, sweep, verify.

Exit codes: 0 success; 1 verification failure; 2 argument validation;
3 integration failure; 4 accuracy failure.
"""
from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import __version__
from .analytic import algII_limit_report
from .errors import AccuracyError, CtqSearchError, IntegrationError
from .model import ScheduleI, ScheduleII, initial_state
from .propagator import integrate_fixed
from .sweep import (
    GridSpec,
    default_workers,
    sweep_ab,
    write_grid_json,
    write_trajectory_csv,
)
from .verify import run_suites, SUITES

LIMIT_ACCURACY = 1e-6


def _parse_n(text: str):
    if text.lower() in ("inf", "infinity"):
        return None
    return int(text)


def _parse_range(text: str):
    lo, _, hi = text.partition(":")
    return float(lo), float(hi)


def _parse_cells(text: str):
    na, _, nb = text.lower().partition("x")
    return int(na), int(nb)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="ctqsearch",
        description="Continuous-time quantum search: dynamics, closed forms, sweeps.",
    )
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="integrate one trajectory, write CSV")
    sim.add_argument("--algorithm", type=int, choices=(1, 2), required=True)
    sim.add_argument("--n", type=int, required=True, help="database size N")
    sim.add_argument("--epsilon", type=float, help="coupling (algorithm 1)")
    sim.add_argument("--alpha", type=float, help="gap velocity (algorithm 1)")
    sim.add_argument("--a", type=float, help="sweep rate (algorithm 2)")
    sim.add_argument("--b", type=float, help="initial detuning (algorithm 2)")
    sim.add_argument("--t-max", type=float, help="time span, absolute units")
    sim.add_argument("--t-max-in-tau", type=float,
                     help="time span in units of tau (algorithm 1 only)")
    sim.add_argument("--samples", type=int, default=2000)
    sim.add_argument("--tol", type=float, default=1e-10)
    sim.add_argument("--out", required=True, help="trajectory CSV path")

    lim = sub.add_parser("limit", help="evaluate the limiting probability p(a,b)")
    lim.add_argument("--n", type=_parse_n, default=None,
                     help="database size, or 'inf' (default)")
    lim.add_argument("--a", type=float, required=True)
    lim.add_argument("--b", type=float, required=True)

    sw = sub.add_parser("sweep", help="p(a,b) over a grid, write JSON")
    sw.add_argument("--a-range", type=_parse_range, default=(0.2, 25.0),
                    metavar="LO:HI")
    sw.add_argument("--b-range", type=_parse_range, default=(0.0, 10.0),
                    metavar="LO:HI")
    sw.add_argument("--cells", type=_parse_cells, default=(250, 250),
                    metavar="NAxNB")
    sw.add_argument("--n", type=_parse_n, default=100,
                    help="database size, or 'inf'")
    sw.add_argument("--workers", type=int, default=None,
                    help="process count (default: CTQSEARCH_WORKERS or 1)")
    sw.add_argument("--out", required=True, help="grid JSON path")

    ver = sub.add_parser("verify", help="run the cross-validation suites")
    ver.add_argument("--suite", action="append", choices=[*SUITES, "all"],
                     help="suite to run (repeatable; default all)")
    ver.add_argument("--fast", action="store_true", help="reduced sample counts")
    ver.add_argument("--out", help="write the JSON report here instead of stdout")
    return p


def _cmd_simulate(args) -> int:
    try:
        if args.algorithm == 1:
            if args.epsilon is None or args.alpha is None:
                print("simulate --algorithm 1 requires --epsilon and --alpha",
                      file=sys.stderr)
                return 2
            if (args.t_max is None) == (args.t_max_in_tau is None):
                print("give exactly one of --t-max / --t-max-in-tau",
                      file=sys.stderr)
                return 2
            schedule = ScheduleI(args.n, args.epsilon, args.alpha)
            t_max = (args.t_max if args.t_max is not None
                     else args.t_max_in_tau * schedule.tau)
            tau = schedule.tau
            t_c = schedule.close_approach_time
        else:
            if args.a is None or args.b is None:
                print("simulate --algorithm 2 requires --a and --b", file=sys.stderr)
                return 2
            if args.t_max is None or args.t_max_in_tau is not None:
                print("algorithm 2 takes --t-max (absolute units only)",
                      file=sys.stderr)
                return 2
            schedule = ScheduleII(args.n, args.a, args.b)
            t_max = args.t_max
            tau = None
            t_c = schedule.tc if schedule.b > 0 else None
        if args.samples < 2 or not t_max > 0:
            print("need --samples >= 2 and positive time span", file=sys.stderr)
            return 2
        grid = np.linspace(0.0, t_max, args.samples)
        traj = integrate_fixed(schedule, initial_state(args.n), grid, tol=args.tol)
    except IntegrationError as exc:
        print(f"integration failed: {exc}", file=sys.stderr)
        return 3
    except CtqSearchError as exc:
        print(f"invalid arguments: {exc}", file=sys.stderr)
        return 2

    write_trajectory_csv(traj, args.out)
    config = {
        "command": "simulate",
        "algorithm": args.algorithm,
        "n": args.n,
        "epsilon": args.epsilon,
        "alpha": args.alpha,
        "a": args.a,
        "b": args.b,
        "t_max": t_max,
        "samples": args.samples,
        "tol": args.tol,
        "out": args.out,
        "version": __version__,
        "nsteps": traj.meta.get("nsteps"),
        "norm_drift": traj.norm_drift,
    }
    with open(args.out + ".meta.json", "w", newline="") as fh:
        json.dump(config, fh, indent=1, sort_keys=True)
        fh.write("\n")
    line = f"final P_s = {traj.p_s[-1]:.6f}"
    if tau is not None:
        line += f", tau = {tau:.6g}"
    if t_c is not None:
        line += f", t_c = {t_c:.6g}"
    print(line)
    return 0


def _cmd_limit(args) -> int:
    try:
        report = algII_limit_report(args.n, args.a, args.b)
    except CtqSearchError as exc:
        print(f"invalid arguments: {exc}", file=sys.stderr)
        return 2
    n_label = "inf" if args.n is None else str(args.n)
    print(f"p(a={args.a:g}, b={args.b:g}; N={n_label}) = {report.value:.12f} "
          f"(estimated error {report.estimated_error:.2e}, {report.branch})")
    if report.estimated_error > LIMIT_ACCURACY:
        print(f"accuracy failure: estimate {report.estimated_error:.2e} exceeds "
              f"{LIMIT_ACCURACY:.0e}", file=sys.stderr)
        return 4
    return 0


def _cmd_sweep(args) -> int:
    try:
        spec = GridSpec(args.a_range[0], args.a_range[1],
                        args.b_range[0], args.b_range[1],
                        args.cells[0], args.cells[1], n=args.n)
        grid = sweep_ab(spec, workers=args.workers)
    except CtqSearchError as exc:
        print(f"invalid arguments: {exc}", file=sys.stderr)
        return 2
    grid.meta["args"] = {
        "a_range": list(args.a_range),
        "b_range": list(args.b_range),
        "cells": list(args.cells),
        "n": args.n if args.n is not None else "inf",
        "workers": args.workers if args.workers is not None else default_workers(),
    }
    write_grid_json(grid, args.out)
    frac = grid.accurate_fraction
    print(f"wrote {args.out}: {spec.n_a}x{spec.n_b} cells, "
          f"{100 * frac:.2f}% flagged accurate")
    if frac < 1.0 and np.max(grid.max_error) > LIMIT_ACCURACY:
        print("accuracy failure on at least one cell", file=sys.stderr)
        return 4
    return 0


def _cmd_verify(args) -> int:
    names = args.suite if args.suite else None
    results = run_suites(names, fast=args.fast)
    report = {
        "version": __version__,
        "fast": args.fast,
        "checks": [r.as_dict() for r in results],
        "passed": all(r.passed for r in results),
    }
    text = json.dumps(report, indent=1, sort_keys=True)
    if args.out:
        with open(args.out, "w", newline="") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    for r in results:
        status = "ok" if r.passed else "FAIL"
        print(f"[{status}] {r.suite}/{r.name}: measured {r.measured:.3e} "
              f"(tolerance {r.tolerance:.3e})", file=sys.stderr)
    return 0 if report["passed"] else 1


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "simulate":
        return _cmd_simulate(args)
    if args.command == "limit":
        return _cmd_limit(args)
    if args.command == "sweep":
        return _cmd_sweep(args)
    if args.command == "verify":
        try:
            return _cmd_verify(args)
        except AccuracyError as exc:
            print(f"accuracy failure during verification: {exc}", file=sys.stderr)
            return 4
    raise AssertionError("unreachable")


if __name__ == "__main__":
    sys.exit(main())

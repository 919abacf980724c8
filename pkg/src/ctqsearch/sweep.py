"""Parameter sweeps, figure-style trajectory batches, and file output.

Output contracts (consumed by external plotting tools, kept bit-exact):

* Trajectory CSV: header ``t,P_s,P_p,re_as,im_as,re_ap,im_ap``, one row per
  sample, 17 significant digits, ``\n`` newlines.
* Grid JSON: object with ``a_values``, ``b_values``, ``p`` (row-major,
  b-indexed rows), ``N`` (integer or "inf"), ``meta``.
"""
from __future__ import annotations

import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .analytic import algII_limit_report
from .errors import ValidationError
from .model import ScheduleI, ScheduleII, initial_state
from .propagator import Trajectory, integrate_fixed

__all__ = [
    "GridSpec",
    "ProbabilityGrid",
    "sweep_ab",
    "figure_dataset",
    "write_trajectory_csv",
    "write_grid_json",
    "default_workers",
    "FIGURE_IDS",
]

# flagged-accurate threshold for grid provenance; comfortably below the 1e-3
# spot-check tolerance and above the evaluator's routine 1e-13 estimates
ACCURACY_FLAG = 1e-8

FIGURE_IDS = ("fig1", "fig2", "fig5")


@dataclass(frozen=True)
class GridSpec:
    """Rectangular (a, b) grid; ``n`` is the database size, None for N->inf."""

    a_min: float
    a_max: float
    b_min: float
    b_max: float
    n_a: int
    n_b: int
    n: int | None = None

    def __post_init__(self):
        if not self.a_min > 0:
            raise ValidationError(f"a_min must be > 0, got {self.a_min}")
        if self.a_max < self.a_min or self.b_max < self.b_min:
            raise ValidationError("grid ranges must be monotone")
        if self.n_a < 1 or self.n_b < 1:
            raise ValidationError("cell counts must be >= 1")
        if self.n is not None and self.n < 2:
            raise ValidationError(f"database size must be >= 2 or None, got {self.n}")

    @property
    def a_values(self) -> np.ndarray:
        if self.n_a == 1:
            return np.array([self.a_min])
        return np.linspace(self.a_min, self.a_max, self.n_a)

    @property
    def b_values(self) -> np.ndarray:
        if self.n_b == 1:
            return np.array([self.b_min])
        return np.linspace(self.b_min, self.b_max, self.n_b)


@dataclass
class ProbabilityGrid:
    """Limiting probabilities over a GridSpec, with per-cell provenance."""

    spec: GridSpec
    values: np.ndarray           # (n_b, n_a) floats in [0, 1]
    max_error: np.ndarray        # per-cell estimated relative error
    branch: list[list[str]]      # per-cell evaluation branch
    meta: dict = field(default_factory=dict)

    @property
    def accurate(self) -> np.ndarray:
        return self.max_error < ACCURACY_FLAG

    @property
    def accurate_fraction(self) -> float:
        return float(np.mean(self.accurate))


def _sweep_rows(spec: GridSpec, rows: list[int]):
    avals = spec.a_values
    bvals = spec.b_values
    out = []
    for i in rows:
        vals = np.empty(len(avals))
        errs = np.empty(len(avals))
        brs = []
        for j, a in enumerate(avals):
            rep = algII_limit_report(spec.n, float(a), float(bvals[i]))
            vals[j] = rep.value
            errs[j] = rep.estimated_error
            brs.append(rep.branch)
        out.append((i, vals, errs, brs))
    return out


def default_workers() -> int:
    """Worker count from CTQSEARCH_WORKERS, default 1 (serial)."""
    try:
        return max(1, int(os.environ.get("CTQSEARCH_WORKERS", "1")))
    except ValueError:
        return 1


def sweep_ab(spec: GridSpec, workers: int | None = None) -> ProbabilityGrid:
    """Evaluate the limiting probability on every grid cell.

    Cells are independent; with ``workers > 1`` rows are farmed out to a
    process pool and reassembled by row index, so the result is identical to
    the serial evaluation.
    """
    workers = default_workers() if workers is None else max(1, workers)
    n_b = spec.n_b
    values = np.empty((n_b, spec.n_a))
    errors = np.empty((n_b, spec.n_a))
    branch: list[list[str]] = [[] for _ in range(n_b)]
    all_rows = list(range(n_b))
    if workers == 1 or n_b == 1:
        chunks = [_sweep_rows(spec, all_rows)]
    else:
        blocks = [all_rows[k::workers] for k in range(workers)]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            chunks = list(pool.map(_sweep_rows, [spec] * len(blocks), blocks))
    for chunk in chunks:
        for i, vals, errs, brs in chunk:
            values[i] = vals
            errors[i] = errs
            branch[i] = brs
    meta = {
        "kind": "limit-probability-grid",
        "N": spec.n if spec.n is not None else "inf",
        "a_range": [spec.a_min, spec.a_max],
        "b_range": [spec.b_min, spec.b_max],
        "cells": [spec.n_a, spec.n_b],
        "accuracy_flag_threshold": ACCURACY_FLAG,
        "version": __version__,
    }
    return ProbabilityGrid(spec, values, errors, branch, meta)


def _schedule_I_trajectory(n, epsilon, alpha, t_max, samples, tol) -> Trajectory:
    s = ScheduleI(n, epsilon, alpha)
    grid = np.linspace(0.0, t_max, samples)
    traj = integrate_fixed(s, initial_state(n), grid, tol=tol)
    traj.meta.update(tau=s.tau, t_c=s.close_approach_time)
    return traj


def _schedule_II_trajectory(n, a, b, t_max, samples, tol) -> Trajectory:
    s = ScheduleII(n, a, b)
    grid = np.linspace(0.0, t_max, samples)
    traj = integrate_fixed(s, initial_state(n), grid, tol=tol)
    traj.meta.update(t_c=s.tc if s.b > 0 else None)
    return traj


def figure_dataset(figure_id: str, samples: int = 2000,
                   tol: float = 1e-11, **overrides) -> list[Trajectory]:
    """Trajectory batches behind the three trajectory figures.

    fig1: schedule I, eps=1, alpha=+1, N in {50, 500, 5000}, t in [0, 3 tau].
    fig2: schedule I, eps=1, N=5000, alpha in {-0.31, -0.10, -0.05} gamma/tau,
          t in [0, 3 t_c].
    fig5: schedule II, N=10^6, b=4.5, a in {1, 5, 20}, t in [0, 20].

    Keyword overrides: ``n_values``, ``alpha_factors``, ``a_values``, ``b``,
    ``epsilon``, ``t_max`` (fig5 only).
    """
    if figure_id not in FIGURE_IDS:
        raise ValidationError(
            f"unknown figure id {figure_id!r}; expected one of {FIGURE_IDS}")
    out = []
    if figure_id == "fig1":
        eps = overrides.get("epsilon", 1.0)
        for n in overrides.get("n_values", (50, 500, 5000)):
            tau = ScheduleI(n, eps, 1.0).tau
            traj = _schedule_I_trajectory(n, eps, 1.0, 3 * tau, samples, tol)
            traj.meta.update(figure="fig1", label=f"N={n}")
            out.append(traj)
    elif figure_id == "fig2":
        eps = overrides.get("epsilon", 1.0)
        n = overrides.get("n", 5000)
        tau = ScheduleI(n, eps, 1.0).tau
        for x in overrides.get("alpha_factors", (0.31, 0.10, 0.05)):
            alpha = -x / tau
            tc = 1.0 / -alpha
            traj = _schedule_I_trajectory(n, eps, alpha, 3 * tc, samples, tol)
            traj.meta.update(figure="fig2", label=f"alpha=-{x}*gamma/tau")
            out.append(traj)
    else:
        n = overrides.get("n", 10 ** 6)
        b = overrides.get("b", 4.5)
        t_max = overrides.get("t_max", 20.0)
        for a in overrides.get("a_values", (1.0, 5.0, 20.0)):
            traj = _schedule_II_trajectory(n, a, b, t_max, samples, tol)
            traj.meta.update(figure="fig5", label=f"a={a}")
            out.append(traj)
    return out


def write_trajectory_csv(traj: Trajectory, path: str) -> None:
    """Write the pinned CSV format (17 significant digits, LF newlines)."""
    cols = (traj.t, traj.p_s, traj.p_p,
            traj.amplitudes[:, 0].real, traj.amplitudes[:, 0].imag,
            traj.amplitudes[:, 1].real, traj.amplitudes[:, 1].imag)
    with open(path, "w", newline="") as fh:
        fh.write("t,P_s,P_p,re_as,im_as,re_ap,im_ap\n")
        for row in zip(*cols):
            fh.write(",".join("%.17g" % v for v in row) + "\n")


def write_grid_json(grid: ProbabilityGrid, path: str) -> None:
    """Write the pinned grid JSON format."""
    doc = {
        "a_values": [float(a) for a in grid.spec.a_values],
        "b_values": [float(b) for b in grid.spec.b_values],
        "p": [[float(v) for v in row] for row in grid.values],
        "N": grid.spec.n if grid.spec.n is not None else "inf",
        "meta": dict(grid.meta,
                     accurate_fraction=grid.accurate_fraction,
                     max_estimated_error=float(np.max(grid.max_error)),
                     branch_counts={
                         br: sum(row.count(br) for row in grid.branch)
                         for br in ("power-series", "asymptotic", "mixed")
                     }),
    }
    with open(path, "w", newline="") as fh:
        json.dump(doc, fh, indent=1, sort_keys=True)
        fh.write("\n")

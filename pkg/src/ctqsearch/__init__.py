"""Continuous-time quantum search on driven two-level schedules.

Exact Schrodinger dynamics (fixed and mobile bases), parabolic-cylinder
closed forms, limiting-probability maps, and a CLI to regenerate all of it.
"""

__version__ = "0.1.0"

from .errors import (
    AccuracyError,
    CtqSearchError,
    DegenerateSolutionError,
    IntegrationError,
    InvalidProblemError,
    PoleError,
    ValidationError,
)
from .model import (
    BlochDecomposition,
    MobilePair,
    ScheduleI,
    ScheduleII,
    SearchProblem,
    StatePair,
    bloch_decompose,
    eigenbasis_rotation,
    hamiltonian_I,
    hamiltonian_II,
    initial_state,
    schedule_I_fg,
)
from .propagator import Trajectory, integrate_fixed, integrate_mobile, mobile_to_fixed
from .specfun import PcfEvalReport, complex_gamma, kummer_m, pcf_d
from .analytic import (
    PcfSolutionI,
    PcfSolutionII,
    algI_alpha0,
    algI_amplitudes,
    algI_approx_probs,
    algI_peak_times,
    algI_solution,
    algII_amplitudes,
    algII_limit_prob,
    algII_limit_prob_inf,
    algII_solution,
    algII_solution_inf,
    close_approach_time,
)
from .sweep import (
    GridSpec,
    ProbabilityGrid,
    figure_dataset,
    sweep_ab,
    write_grid_json,
    write_trajectory_csv,
)

__all__ = [
    "__version__",
    # errors
    "CtqSearchError", "InvalidProblemError", "ValidationError", "PoleError",
    "AccuracyError", "IntegrationError", "DegenerateSolutionError",
    # model
    "SearchProblem", "ScheduleI", "ScheduleII", "StatePair", "MobilePair",
    "BlochDecomposition", "initial_state", "schedule_I_fg", "hamiltonian_I",
    "hamiltonian_II", "bloch_decompose", "eigenbasis_rotation",
    # propagator
    "Trajectory", "integrate_fixed", "integrate_mobile", "mobile_to_fixed",
    # specfun
    "PcfEvalReport", "complex_gamma", "kummer_m", "pcf_d",
    # analytic
    "PcfSolutionI", "PcfSolutionII", "algI_solution", "algI_amplitudes",
    "algI_alpha0", "algI_approx_probs", "algI_peak_times",
    "close_approach_time", "algII_solution", "algII_solution_inf",
    "algII_amplitudes", "algII_limit_prob", "algII_limit_prob_inf",
    # sweep
    "GridSpec", "ProbabilityGrid", "sweep_ab", "figure_dataset",
    "write_trajectory_csv", "write_grid_json",
]

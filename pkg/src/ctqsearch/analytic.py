"""Closed-form amplitudes and limiting probabilities for both schedules.

Everything here reduces to Weber's equation W'' + (eta + 1/2 - z^2/4) W = 0
after a quadratic-phase substitution, so the amplitudes come out as
combinations A1*D_eta(z) + A2*D_eta(-z) of parabolic cylinder functions with
schedule-specific affine maps t -> z.  Derivatives are taken with the exact
identity D'_nu(z) = nu*D_{nu-1}(z) - (z/2)*D_nu(z), never numerically.
"""
from __future__ import annotations

import cmath
import logging
import math
from dataclasses import dataclass

from .errors import DegenerateSolutionError, ValidationError
from .model import MobilePair, ScheduleI, ScheduleII, StatePair, _check_n
from .specfun import pcf_d

__all__ = [
    "PcfSolutionI",
    "PcfSolutionII",
    "LimitReport",
    "algI_solution",
    "algI_amplitudes",
    "algI_alpha0",
    "algI_approx_probs",
    "algI_peak_times",
    "close_approach_time",
    "algII_solution",
    "algII_solution_inf",
    "algII_amplitudes",
    "algII_limit_report",
    "algII_limit_prob",
    "algII_limit_prob_inf",
]

log = logging.getLogger(__name__)

_ROT_M4 = cmath.exp(-1j * math.pi / 4)
_ROT_P4 = cmath.exp(1j * math.pi / 4)
_ROT_3P4 = cmath.exp(3j * math.pi / 4)


def _coefficient_block(eta: complex, z0: complex):
    """D_eta and D_{eta-1} at +-z0, their shared denominator, and provenance."""
    reps = (pcf_d(eta, z0), pcf_d(eta, -z0),
            pcf_d(eta - 1, z0), pcf_d(eta - 1, -z0))
    dz, dmz, dz1, dmz1 = (r.value for r in reps)
    den = dz1 * dmz + dz * dmz1
    scale = max(abs(dz1 * dmz), abs(dz * dmz1), 1e-300)
    if abs(den) < 1e-12 * scale:
        raise DegenerateSolutionError(
            f"coefficient denominator vanished (eta={eta}, z0={z0}); "
            "the two D-function solutions degenerated"
        )
    err = max(r.estimated_error for r in reps)
    branches = {r.branch_used for r in reps}
    branch = branches.pop() if len(branches) == 1 else "mixed"
    return dz, dmz, dz1, dmz1, den, err, branch


def _w_and_derivative(eta, a1, a2, z):
    """W(z) = A1 D_eta(z) + A2 D_eta(-z) and dW/dz via the ladder identity."""
    dz = pcf_d(eta, z).value
    dmz = pcf_d(eta, -z).value
    dz1 = pcf_d(eta - 1, z).value
    dmz1 = pcf_d(eta - 1, -z).value
    w = a1 * dz + a2 * dmz
    wz = -0.5 * z * w + eta * (a1 * dz1 - a2 * dmz1)
    return w, wz


@dataclass(frozen=True)
class PcfSolutionI:
    """Analytic mobile-basis solution of the first schedule (alpha != 0).

    a_-(t) = exp(-i(alpha t^2 + 2 gamma t)/4) * W(z(t)) with
    z(t) = sqrt(alpha) e^{-i pi/4} (t + gamma/alpha); for alpha < 0 the branch
    sqrt(alpha) = i sqrt(|alpha|) is used, and the formula is trusted only up
    to the level crossing (the ODE route is authoritative past it).
    """

    schedule: ScheduleI
    eta: complex
    sqrt_alpha: complex
    z0: complex
    a1: complex
    a2: complex
    accuracy: float

    def z_of(self, t: float) -> complex:
        s = self.schedule
        return self.sqrt_alpha * _ROT_M4 * (t + s.gamma / s.alpha)

    def initial_value(self) -> complex:
        """W at z0; equals a_-(0) = 1 by construction."""
        return _w_and_derivative(self.eta, self.a1, self.a2, self.z0)[0]

    def initial_derivative(self) -> complex:
        """dW/dz at z0; da_-/dt(0) = 0 forces this to equal -z0/2."""
        return _w_and_derivative(self.eta, self.a1, self.a2, self.z0)[1]


def algI_solution(s: ScheduleI) -> PcfSolutionI:
    """Coefficients A1, A2 pinned by a_-(0) = 1, da_-/dt(0) = 0."""
    if s.alpha == 0:
        raise ValidationError("alpha = 0 has a trigonometric solution; "
                              "use algI_alpha0")
    sqrt_alpha = (math.sqrt(s.alpha) + 0j if s.alpha > 0
                  else 1j * math.sqrt(-s.alpha))
    eta = 1j * s.omega0 ** 2 / s.alpha
    z0 = sqrt_alpha * _ROT_M4 * (s.gamma / s.alpha)
    _, _, dz1, dmz1, den, err, _ = _coefficient_block(eta, z0)
    return PcfSolutionI(s, eta, sqrt_alpha, z0, dmz1 / den, dz1 / den, err)


def algI_amplitudes(sol: PcfSolutionI, t: float) -> MobilePair:
    """Mobile amplitudes at time t from the analytic solution.

    a_+ is recovered from the coupled first-order system as
    a_+ = (da_-/dt) / Omega*(t) with Omega = -Omega0 exp(i int omega).
    """
    s = sol.schedule
    z = sol.z_of(t)
    w, wz = _w_and_derivative(sol.eta, sol.a1, sol.a2, z)
    phi = 0.25 * (s.alpha * t * t + 2 * s.gamma * t)
    ephi = cmath.exp(-1j * phi)
    a_minus = ephi * w
    dminus = ephi * (-0.5j * (s.alpha * t + s.gamma) * w + sol.sqrt_alpha * _ROT_M4 * wz)
    ph = s.phase_integral(t)
    omega_conj = -s.omega0 * cmath.exp(-1j * ph)
    return MobilePair(dminus / omega_conj, a_minus, ph)


def algI_alpha0(s: ScheduleI, t: float) -> MobilePair:
    """Exact amplitudes for the constant-gap schedule (alpha = 0).

    With Lambda = sqrt((gamma/2)^2 + Omega0^2) and phi = Lambda*t:
    a_- = e^{-i gamma t/2} [cos phi + i (gamma/2)/Lambda sin phi],
    a_+ = (Omega0/Lambda) e^{+i gamma t/2} sin phi.
    The phases are chosen so the pair solves the mobile system exactly;
    |a_+|^2 + |a_-|^2 = 1 identically.
    """
    if s.alpha != 0:
        raise ValidationError(f"algI_alpha0 requires alpha = 0, got {s.alpha}")
    lam = math.hypot(s.gamma / 2, s.omega0)
    phi = lam * t
    half = cmath.exp(-0.5j * s.gamma * t)
    a_minus = half * (math.cos(phi) + 0.5j * s.gamma / lam * math.sin(phi))
    a_plus = (s.omega0 / lam) * math.sin(phi) / half
    return MobilePair(a_plus, a_minus, s.gamma * t)


def algI_approx_probs(s: ScheduleI, t: float, offset: bool = False):
    """Resonance approximation (P_s, P_p) = (sin^2, cos^2)(Omega0 t).

    ``offset=True`` keeps the finite-N mixing-angle offset,
    P_s = sin^2(theta(t)/2), exact whenever |a_-| = 1.
    """
    x = 0.5 * s.theta(t) if offset else s.omega0 * t
    ps = math.sin(x) ** 2
    return ps, 1.0 - ps


def algI_peak_times(s: ScheduleI, l_max: int) -> list[float]:
    """Probability-extremum times tau*l, truncated at the crossing for alpha<0."""
    if l_max < 1:
        raise ValidationError(f"l_max must be >= 1, got {l_max}")
    times = [s.tau * l for l in range(1, l_max + 1)]
    tc = s.close_approach_time
    if tc is not None:
        times = [t for t in times if t < tc]
    return times


def close_approach_time(schedule: ScheduleI | ScheduleII) -> float | None:
    """Gap-closure time: -gamma/alpha (schedule I, alpha<0) or b/a (schedule II, b>0)."""
    if isinstance(schedule, ScheduleI):
        return schedule.close_approach_time
    if isinstance(schedule, ScheduleII):
        return schedule.tc if schedule.b > 0 else None
    raise ValidationError(f"unsupported schedule type {type(schedule)!r}")


@dataclass(frozen=True)
class PcfSolutionII:
    """Analytic fixed-basis solution of the linear sweep.

    a_s(t) = exp(i(a t^2/2 - b t)) * W(z(t)), z(t) = sqrt(2a) e^{i pi/4} (t - b/a).
    ``n`` is None for the N -> infinity limit of the coefficients.
    """

    n: int | None
    a: float
    b: float
    eta: complex
    z0: complex
    q0: complex
    a1: complex
    a2: complex
    k: float
    accuracy: float
    branch: str = "power-series"

    def z_of(self, t: float) -> complex:
        return math.sqrt(2 * self.a) * _ROT_P4 * (t - self.b / self.a)

    def initial_value(self) -> complex:
        """W at z0; equals a_s(0) = 1/sqrt(N)."""
        return _w_and_derivative(self.eta, self.a1, self.a2, self.z0)[0]

    def initial_derivative(self) -> complex:
        """dW/dz at z0, fixed by da_s/dt(0) = i sqrt((N-1)/N)."""
        return _w_and_derivative(self.eta, self.a1, self.a2, self.z0)[1]


def _algII_geometry(a: float, b: float):
    if not a > 0:
        raise ValidationError(f"sweep rate a must be > 0, got {a}")
    eta = -0.5j / a
    z0 = -b * math.sqrt(2.0 / a) * _ROT_P4
    return eta, z0


def algII_solution(n: int, a: float, b: float) -> PcfSolutionII:
    """Coefficients for the finite-N sweep, pinned by the t=0 state."""
    n = _check_n(n)
    eta, z0 = _algII_geometry(a, b)
    dz, dmz, dz1, dmz1, den, err, branch = _coefficient_block(eta, z0)
    q0 = math.sqrt(2 * a) * math.sqrt((n - 1.0) / n) * _ROT_3P4
    rn = math.sqrt(n)
    a1 = (dmz1 + rn * q0 * dmz) / (rn * den)
    a2 = (dz1 - rn * q0 * dz) / (rn * den)
    return PcfSolutionII(n, a, b, eta, z0, q0, a1, a2, 0.5 / a, err, branch)


def algII_solution_inf(a: float, b: float) -> PcfSolutionII:
    """Termwise N -> infinity limit of the coefficients.

    (1/sqrt(N)) D_{eta-1} terms drop and q0 -> q_inf = sqrt(2a) e^{3 i pi/4},
    leaving A1 = q_inf D_eta(-z0)/den, A2 = -q_inf D_eta(z0)/den.
    """
    eta, z0 = _algII_geometry(a, b)
    dz, dmz, _, _, den, err, branch = _coefficient_block(eta, z0)
    qi = math.sqrt(2 * a) * _ROT_3P4
    return PcfSolutionII(None, a, b, eta, z0, qi,
                         qi * dmz / den, -qi * dz / den, 0.5 / a, err, branch)


def algII_amplitudes(sol: PcfSolutionII, t: float) -> StatePair:
    """Fixed-basis amplitudes at time t; a_p follows from a_p = -i da_s/dt."""
    if sol.n is None:
        raise ValidationError(
            "amplitudes need finite-N initial conditions; build with algII_solution")
    z = sol.z_of(t)
    w, wz = _w_and_derivative(sol.eta, sol.a1, sol.a2, z)
    chi = 0.5 * sol.a * t * t - sol.b * t
    echi = cmath.exp(1j * chi)
    zdot = math.sqrt(2 * sol.a) * _ROT_P4
    a_s = echi * w
    a_p = echi * ((sol.a * t - sol.b) * w - 1j * zdot * wz)
    return StatePair(a_s, a_p)


@dataclass(frozen=True)
class LimitReport:
    """Limiting probability plus evaluation provenance for one (a, b) cell."""

    value: float
    raw: float
    estimated_error: float
    branch: str


def _limit_from_solution(sol: PcfSolutionII) -> LimitReport:
    k = sol.k
    amp = sol.a1 * math.exp(k * math.pi / 4) + sol.a2 * math.exp(-3 * math.pi * k / 4)
    raw = abs(amp) ** 2
    value = min(1.0, max(0.0, raw))
    if raw > 1 + 1e-6 or raw < -1e-6:
        log.warning("limit probability far outside [0,1]: raw = %.6g "
                    "(a=%g, b=%g)", raw, sol.a, sol.b)
    elif raw != value:
        log.debug("clamped limit probability %.17g -> %.1f", raw, value)
    return LimitReport(value, raw, sol.accuracy, sol.branch)


def algII_limit_report(n: int | None, a: float, b: float) -> LimitReport:
    """As algII_limit_prob but carrying accuracy/branch provenance."""
    sol = algII_solution_inf(a, b) if n is None else algII_solution(n, a, b)
    return _limit_from_solution(sol)


def algII_limit_prob(n: int, a: float, b: float) -> float:
    """t -> infinity searched-state probability p(a, b) at database size n."""
    return algII_limit_report(n, a, b).value


def algII_limit_prob_inf(a: float, b: float) -> float:
    """p(a, b) with the N -> infinity coefficients."""
    return algII_limit_report(None, a, b).value

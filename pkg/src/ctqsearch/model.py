"""Two-level reduction of the continuous-time search problem.

The search over N items reduces to dynamics in the plane spanned by the
marked state and the uniform superposition of the unmarked ones.  This
module defines the two driving schedules, builds their 2x2 Hamiltonians,
and provides the geometry of the instantaneous eigenbasis (mixing angle,
gap, rotation matrices).

Conventions: hbar = 1, amplitudes ordered (a_s, a_p) with a_s the marked
component.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidProblemError, ValidationError

__all__ = [
    "SearchProblem",
    "ScheduleI",
    "ScheduleII",
    "StatePair",
    "MobilePair",
    "BlochDecomposition",
    "initial_state",
    "schedule_I_fg",
    "hamiltonian_I",
    "hamiltonian_II",
    "bloch_decompose",
    "eigenbasis_rotation",
]


def _check_n(n) -> int:
    if not isinstance(n, (int, np.integer)) or isinstance(n, bool):
        raise InvalidProblemError(f"database size must be an integer, got {n!r}")
    if n < 2:
        raise InvalidProblemError(
            f"database size N must be >= 2 (need a marked state and a "
            f"nonempty orthogonal complement), got {n}"
        )
    return int(n)


@dataclass(frozen=True)
class SearchProblem:
    """An unstructured database of ``n`` items with one marked item."""

    n: int

    def __post_init__(self):
        _check_n(self.n)


@dataclass(frozen=True)
class StatePair:
    """Amplitudes (a_s, a_p) in the fixed {|s>, |p>} basis."""

    a_s: complex
    a_p: complex

    @property
    def p_s(self) -> float:
        return abs(self.a_s) ** 2

    @property
    def p_p(self) -> float:
        return abs(self.a_p) ** 2

    def norm2(self) -> float:
        return self.p_s + self.p_p

    def as_array(self) -> np.ndarray:
        return np.array([self.a_s, self.a_p], dtype=complex)


@dataclass(frozen=True)
class MobilePair:
    """Amplitudes (a_+, a_-) in the instantaneous eigenbasis.

    ``accumulated_phase`` is the gap integral int_0^t omega(t') dt', needed to
    undo the diagonal phases when mapping back to the fixed basis.
    """

    a_plus: complex
    a_minus: complex
    accumulated_phase: float = 0.0

    def norm2(self) -> float:
        return abs(self.a_plus) ** 2 + abs(self.a_minus) ** 2


@dataclass(frozen=True)
class ScheduleI:
    """Linear gap/mixing-angle drive.

    The gap closes (or not) linearly, omega(t) = |alpha*t + gamma|, while the
    mixing angle advances uniformly, theta(t) = theta0 + 2*Omega0*t.  gamma is
    pinned to 1 by the normalization f(0) = 1, g(0) = 0.
    """

    n: int
    epsilon: float
    alpha: float
    gamma: float = 1.0

    def __post_init__(self):
        _check_n(self.n)
        if not self.epsilon > 0:
            raise ValidationError(f"epsilon must be > 0, got {self.epsilon}")
        if self.gamma != 1.0:
            raise ValidationError(
                "gamma is fixed to 1 by the initial conditions f(0)=1, g(0)=0"
            )

    @property
    def omega0(self) -> float:
        """Constant mobile-basis coupling magnitude sqrt(N-1)*eps/N."""
        return math.sqrt(self.n - 1) * self.epsilon / self.n

    @property
    def tau(self) -> float:
        """First probability-peak time pi*N/(2*sqrt(N-1)*eps)."""
        return math.pi * self.n / (2 * math.sqrt(self.n - 1) * self.epsilon)

    @property
    def theta0(self) -> float:
        """Initial mixing angle, sin(theta0) = -2*sqrt(N-1)/N, in (-pi/2, 0]."""
        return -math.asin(2 * math.sqrt(self.n - 1) / self.n)

    @property
    def beta(self) -> float:
        """Auxiliary angle with sin(beta) = (2-N)/N, cos(beta) = 2*sqrt(N-1)/N."""
        return -math.pi / 2 - self.theta0

    @property
    def close_approach_time(self) -> float | None:
        """Level-crossing time -gamma/alpha, defined only for alpha < 0."""
        if self.alpha < 0:
            return -self.gamma / self.alpha
        return None

    def theta(self, t: float) -> float:
        return self.theta0 + 2 * self.omega0 * t

    def omega(self, t: float) -> float:
        return abs(self.alpha * t + self.gamma)

    def phase_integral(self, t: float) -> float:
        """int_0^t omega(t') dt', piecewise quadratic (split at the crossing)."""
        a, g = self.alpha, self.gamma
        if a >= 0 or t <= -g / a:
            return g * t + 0.5 * a * t * t
        tc = -g / a
        head = g * tc + 0.5 * a * tc * tc
        return head - (g * (t - tc) + 0.5 * a * (t * t - tc * tc))


@dataclass(frozen=True)
class ScheduleII:
    """Linear sweep of the diagonal matrix element.

    f is clamped at N/sqrt(N-1); g(t) = (N-2)/sqrt(N-1) + 2*(b - a*t) makes the
    working Hamiltonian [[0, -1], [-1, 2b-2at]] up to a constant shift.
    """

    n: int
    a: float
    b: float

    def __post_init__(self):
        _check_n(self.n)
        if not self.a > 0:
            raise ValidationError(f"sweep rate a must be > 0, got {self.a}")

    @property
    def f_const(self) -> float:
        return self.n / math.sqrt(self.n - 1)

    @property
    def tc(self) -> float:
        """Minimum-gap time b/a."""
        return self.b / self.a

    def g(self, t: float) -> float:
        return (self.n - 2) / math.sqrt(self.n - 1) + 2 * (self.b - self.a * t)

    def omega(self, t: float) -> float:
        """Gap-scale function sqrt((a*t-b)^2 + 1); half the eigenvalue splitting."""
        return math.hypot(self.a * t - self.b, 1.0)


def initial_state(problem: SearchProblem | int) -> StatePair:
    """Uniform superposition expressed in the {|s>, |p>} basis."""
    n = problem.n if isinstance(problem, SearchProblem) else _check_n(problem)
    return StatePair(math.sqrt(1.0 / n), math.sqrt((n - 1.0) / n))


def schedule_I_fg(s: ScheduleI, t: float) -> tuple[float, float]:
    """Drive functions (f, g) of the first schedule at time t.

    f = -N/(2*sqrt(N-1)) * omega(t) * sin(theta(t))
    g = -N/(2*sqrt(N-1)) * omega(t) * cos(theta(t) + beta)
    """
    c = s.n / (2 * math.sqrt(s.n - 1))
    th = s.theta(t)
    w = s.omega(t)
    return -c * w * math.sin(th), -c * w * math.cos(th + s.beta)


def hamiltonian_I(s: ScheduleI, t: float) -> np.ndarray:
    """Reduced 2x2 Hamiltonian (1/N)[[(N-1)f, -r f], [-r f, f+Ng]], r=sqrt(N-1)."""
    f, g = schedule_I_fg(s, t)
    n = s.n
    r = math.sqrt(n - 1)
    return np.array(
        [[(n - 1) * f / n, -r * f / n], [-r * f / n, (f + n * g) / n]]
    )


def hamiltonian_II(s: ScheduleII, t: float, include_identity_shift: bool = False) -> np.ndarray:
    """Working Hamiltonian [[0, -1], [-1, 2b-2at]] of the second schedule.

    The constant sqrt(N-1)*I part of the physical Hamiltonian only contributes
    a global phase; pass ``include_identity_shift=True`` to restore it (for
    energy-scale reporting, never for probabilities).
    """
    h = np.array([[0.0, -1.0], [-1.0, 2 * s.b - 2 * s.a * t]])
    if include_identity_shift:
        h += math.sqrt(s.n - 1) * np.eye(2)
    return h


@dataclass(frozen=True)
class BlochDecomposition:
    """H = phase_coefficient*I + (gap/2) * axis . sigma with axis in the xz-plane."""

    phase_coefficient: float
    gap: float
    axis: np.ndarray = field(repr=False)
    theta: float = 0.0


def bloch_decompose(h: np.ndarray, tol: float = 1e-12) -> BlochDecomposition:
    """Split a real-symmetric 2x2 Hamiltonian into identity and Pauli parts.

    ``gap`` is the eigenvalue splitting E_+ - E_-; ``theta`` the mixing angle
    with axis = (sin theta, 0, cos theta).
    """
    h = np.asarray(h, dtype=complex)
    if h.shape != (2, 2):
        raise ValidationError(f"expected a 2x2 matrix, got shape {h.shape}")
    if abs(h[0, 1] - np.conj(h[1, 0])) > tol * max(1.0, abs(h[0, 1])):
        raise ValidationError("matrix is not Hermitian")
    if abs(h[0, 1].imag) > tol or abs(h[0, 0].imag) > tol or abs(h[1, 1].imag) > tol:
        raise ValidationError("off-diagonal must be real (zero Bloch y-component)")
    hr = h.real
    phase = 0.5 * (hr[0, 0] + hr[1, 1])
    d = 0.5 * (hr[0, 0] - hr[1, 1])
    c = hr[0, 1]
    half = math.hypot(d, c)
    if half == 0.0:
        return BlochDecomposition(phase, 0.0, np.array([0.0, 0.0, 1.0]), 0.0)
    axis = np.array([c / half, 0.0, d / half])
    return BlochDecomposition(phase, 2 * half, axis, math.atan2(c, d))


def eigenbasis_rotation(theta: float) -> np.ndarray:
    """U^dagger(theta): columns are the instantaneous eigenvectors.

    [[cos(theta/2), -sin(theta/2)], [sin(theta/2), cos(theta/2)]]; orthogonal
    with determinant 1.
    """
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    return np.array([[c, -s], [s, c]])

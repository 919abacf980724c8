"""Time integration of the two-level Schrodinger equation.

Both bases are supported: the fixed {|s>, |p>} basis (d/dt psi = -i H(t) psi)
and the mobile instantaneous eigenbasis, where the only coupling is the
constant-magnitude Omega(t) = -Omega0 * exp(i * int omega).  The integrator is
an embedded adaptive Dormand-Prince 5(4) pair that lands exactly on the
requested sample times; the two driving schedules get compiled (numba)
right-hand sides, arbitrary Hamiltonian callables fall back to a pure-python
loop with the same tableau.

For ScheduleI the fixed-basis propagation uses the traceless part of the
Hamiltonian: the (f+g)/2 identity component only contributes a global phase
(it grows like sqrt(N) and would dominate the step size), and dropping it
makes the fixed and mobile routes agree amplitude-by-amplitude, not just in
probability.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from numba import njit

from .errors import IntegrationError, ValidationError
from .model import MobilePair, ScheduleI, ScheduleII, StatePair

__all__ = [
    "Trajectory",
    "integrate_fixed",
    "integrate_mobile",
    "mobile_to_fixed",
    "DEFAULT_TOL",
]

DEFAULT_TOL = 1e-10
_TOL_RANGE = (1e-13, 1e-6)

# Dormand-Prince 5(4) tableau
_A21 = 1 / 5
_A31, _A32 = 3 / 40, 9 / 40
_A41, _A42, _A43 = 44 / 45, -56 / 15, 32 / 9
_A51, _A52, _A53, _A54 = 19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729
_A61, _A62, _A63, _A64, _A65 = (9017 / 3168, -355 / 33, 46732 / 5247,
                                49 / 176, -5103 / 18656)
_B1, _B3, _B4, _B5, _B6 = 35 / 384, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84
_E1, _E3, _E4, _E5, _E6, _E7 = (71 / 57600, -71 / 16695, 71 / 1920,
                                -17253 / 339200, 22 / 525, -1 / 40)
_C2, _C3, _C4, _C5 = 1 / 5, 3 / 10, 4 / 5, 8 / 9

_MODEL_SCHED_I = 1
_MODEL_SCHED_II = 2
_MODEL_MOBILE_I = 3


@njit(cache=True)
def _rhs_nb(model, p, t, y0, y1):
    if model == 1:
        # traceless schedule-I Hamiltonian, p = (om0, th0, alpha, gamma)
        th = p[1] + 2.0 * p[0] * t
        w = abs(p[2] * t + p[3])
        hx = 0.5 * w * math.sin(th)
        hz = 0.5 * w * math.cos(th)
        return -1j * (hz * y0 + hx * y1), -1j * (hx * y0 - hz * y1)
    elif model == 2:
        # schedule-II working Hamiltonian [[0,-1],[-1, 2b-2at]], p = (a, b)
        d = 2.0 * p[1] - 2.0 * p[0] * t
        return 1j * y1, -1j * (-y0 + d * y1)
    else:
        # mobile basis, p = (om0, alpha, gamma, tc, head)
        if p[1] >= 0 or t <= p[3]:
            ph = p[2] * t + 0.5 * p[1] * t * t
        else:
            ph = p[4] - (p[2] * (t - p[3]) + 0.5 * p[1] * (t * t - p[3] * p[3]))
        om = p[0] * complex(math.cos(ph), math.sin(ph))
        return om * y1, -om.conjugate() * y0


@njit(cache=True)
def _dp45_nb(model, p, y0a, y0b, tgrid, rtol, atol):
    n = tgrid.shape[0]
    out = np.empty((n, 2), dtype=np.complex128)
    t = tgrid[0]
    a, b = y0a, y0b
    out[0, 0] = a
    out[0, 1] = b
    k1a, k1b = _rhs_nb(model, p, t, a, b)
    h = min(1e-2, (tgrid[n - 1] - t) / 10.0)
    nsteps = 0
    for i in range(1, n):
        tend = tgrid[i]
        while t < tend:
            if h > tend - t:
                h = tend - t
            ya = a + h * _A21 * k1a
            yb = b + h * _A21 * k1b
            k2a, k2b = _rhs_nb(model, p, t + _C2 * h, ya, yb)
            ya = a + h * (_A31 * k1a + _A32 * k2a)
            yb = b + h * (_A31 * k1b + _A32 * k2b)
            k3a, k3b = _rhs_nb(model, p, t + _C3 * h, ya, yb)
            ya = a + h * (_A41 * k1a + _A42 * k2a + _A43 * k3a)
            yb = b + h * (_A41 * k1b + _A42 * k2b + _A43 * k3b)
            k4a, k4b = _rhs_nb(model, p, t + _C4 * h, ya, yb)
            ya = a + h * (_A51 * k1a + _A52 * k2a + _A53 * k3a + _A54 * k4a)
            yb = b + h * (_A51 * k1b + _A52 * k2b + _A53 * k3b + _A54 * k4b)
            k5a, k5b = _rhs_nb(model, p, t + _C5 * h, ya, yb)
            ya = a + h * (_A61 * k1a + _A62 * k2a + _A63 * k3a + _A64 * k4a
                          + _A65 * k5a)
            yb = b + h * (_A61 * k1b + _A62 * k2b + _A63 * k3b + _A64 * k4b
                          + _A65 * k5b)
            k6a, k6b = _rhs_nb(model, p, t + h, ya, yb)
            y5a = a + h * (_B1 * k1a + _B3 * k3a + _B4 * k4a + _B5 * k5a
                           + _B6 * k6a)
            y5b = b + h * (_B1 * k1b + _B3 * k3b + _B4 * k4b + _B5 * k5b
                           + _B6 * k6b)
            k7a, k7b = _rhs_nb(model, p, t + h, y5a, y5b)
            erra = h * (_E1 * k1a + _E3 * k3a + _E4 * k4a + _E5 * k5a
                        + _E6 * k6a + _E7 * k7a)
            errb = h * (_E1 * k1b + _E3 * k3b + _E4 * k4b + _E5 * k5b
                        + _E6 * k6b + _E7 * k7b)
            sca = atol + rtol * max(abs(a), abs(y5a))
            scb = atol + rtol * max(abs(b), abs(y5b))
            err = math.sqrt(0.5 * ((abs(erra) / sca) ** 2
                                   + (abs(errb) / scb) ** 2))
            if err <= 1.0:
                t = t + h
                a, b = y5a, y5b
                k1a, k1b = k7a, k7b
                nsteps += 1
            if err == 0.0:
                fac = 10.0
            else:
                fac = min(10.0, max(0.2, 0.9 * err ** -0.2))
            h = h * fac
            if h < 4.0 * 2.2e-16 * max(1.0, abs(t)):
                return out, -1, t, nsteps
        out[i, 0] = a
        out[i, 1] = b
    return out, 0, t, nsteps


def _dp45_py(rhs, y0: np.ndarray, tgrid: np.ndarray, rtol: float, atol: float):
    """Same stepper as the compiled kernel, for arbitrary python right-hand sides."""
    n = len(tgrid)
    out = np.empty((n, 2), dtype=complex)
    t = tgrid[0]
    y = y0.astype(complex)
    out[0] = y
    k1 = rhs(t, y)
    h = min(1e-2, (tgrid[-1] - t) / 10.0)
    nsteps = 0
    for i in range(1, n):
        tend = tgrid[i]
        while t < tend:
            if h > tend - t:
                h = tend - t
            k2 = rhs(t + _C2 * h, y + h * _A21 * k1)
            k3 = rhs(t + _C3 * h, y + h * (_A31 * k1 + _A32 * k2))
            k4 = rhs(t + _C4 * h, y + h * (_A41 * k1 + _A42 * k2 + _A43 * k3))
            k5 = rhs(t + _C5 * h,
                     y + h * (_A51 * k1 + _A52 * k2 + _A53 * k3 + _A54 * k4))
            k6 = rhs(t + h, y + h * (_A61 * k1 + _A62 * k2 + _A63 * k3
                                     + _A64 * k4 + _A65 * k5))
            y5 = y + h * (_B1 * k1 + _B3 * k3 + _B4 * k4 + _B5 * k5 + _B6 * k6)
            k7 = rhs(t + h, y5)
            ev = h * (_E1 * k1 + _E3 * k3 + _E4 * k4 + _E5 * k5 + _E6 * k6
                      + _E7 * k7)
            sc = atol + rtol * np.maximum(np.abs(y), np.abs(y5))
            err = math.sqrt(0.5 * float(np.sum((np.abs(ev) / sc) ** 2)))
            if err <= 1.0:
                t = t + h
                y = y5
                k1 = k7
                nsteps += 1
            fac = 10.0 if err == 0.0 else min(10.0, max(0.2, 0.9 * err ** -0.2))
            h = h * fac
            if h < 4.0 * 2.2e-16 * max(1.0, abs(t)):
                return out, -1, t, nsteps
        out[i] = y
    return out, 0, t, nsteps


@dataclass
class Trajectory:
    """Sampled amplitudes (a_s, a_p) and probabilities along one run."""

    t: np.ndarray
    amplitudes: np.ndarray  # shape (n, 2), complex
    meta: dict = field(default_factory=dict)

    @property
    def p_s(self) -> np.ndarray:
        return np.abs(self.amplitudes[:, 0]) ** 2

    @property
    def p_p(self) -> np.ndarray:
        return np.abs(self.amplitudes[:, 1]) ** 2

    @property
    def norm_drift(self) -> float:
        return float(np.max(np.abs(self.p_s + self.p_p - 1.0)))

    @property
    def samples(self):
        """Ordered (t, StatePair, P_s, P_p) tuples."""
        return [
            (float(t), StatePair(complex(a), complex(b)),
             abs(a) ** 2, abs(b) ** 2)
            for t, (a, b) in zip(self.t, self.amplitudes)
        ]


def _validate_grid_tol(t_grid, tol):
    tg = np.asarray(t_grid, dtype=float)
    if tg.ndim != 1 or len(tg) < 2:
        raise ValidationError("t_grid must be a 1-d array with >= 2 samples")
    if tg[0] != 0.0:
        raise ValidationError("t_grid must start at 0")
    if not np.all(np.diff(tg) > 0):
        raise ValidationError("t_grid must be strictly increasing")
    if not (_TOL_RANGE[0] <= tol <= _TOL_RANGE[1]):
        raise ValidationError(f"tol must lie in {_TOL_RANGE}, got {tol}")
    return tg


def _state_as_array(state0) -> np.ndarray:
    if isinstance(state0, StatePair):
        arr = state0.as_array()
    else:
        arr = np.asarray(state0, dtype=complex)
    if arr.shape != (2,):
        raise ValidationError("initial state must have two components")
    norm = float(np.sum(np.abs(arr) ** 2))
    if abs(norm - 1.0) > 1e-9:
        raise ValidationError(f"initial state must be unit norm, |psi|^2 = {norm}")
    return arr


def integrate_fixed(
    hamiltonian: ScheduleI | ScheduleII | Callable[[float], np.ndarray],
    state0: StatePair | Sequence[complex],
    t_grid: Sequence[float],
    tol: float = DEFAULT_TOL,
) -> Trajectory:
    """Propagate d/dt psi = -i H(t) psi over t_grid in the fixed basis.

    ``hamiltonian`` may be a ScheduleI (integrated with the traceless part of
    its Hamiltonian, see module docstring), a ScheduleII (working matrix
    [[0,-1],[-1,2b-2at]]), or any callable t -> 2x2 matrix.
    """
    tg = _validate_grid_tol(t_grid, tol)
    y0 = _state_as_array(state0)
    meta: dict = {"tol": tol, "method": "dp45"}
    if isinstance(hamiltonian, ScheduleI):
        s = hamiltonian
        p = np.array([s.omega0, s.theta0, s.alpha, s.gamma, 0.0])
        out, status, t_fail, nsteps = _dp45_nb(
            _MODEL_SCHED_I, p, complex(y0[0]), complex(y0[1]), tg, tol, tol)
        meta.update(schedule="I", n=s.n, epsilon=s.epsilon, alpha=s.alpha,
                    gamma=s.gamma, traceless=True)
    elif isinstance(hamiltonian, ScheduleII):
        s = hamiltonian
        p = np.array([s.a, s.b, 0.0, 0.0, 0.0])
        out, status, t_fail, nsteps = _dp45_nb(
            _MODEL_SCHED_II, p, complex(y0[0]), complex(y0[1]), tg, tol, tol)
        meta.update(schedule="II", n=s.n, a=s.a, b=s.b)
    else:
        h = hamiltonian

        def rhs(t, y):
            return -1j * (np.asarray(h(t), dtype=complex) @ y)

        out, status, t_fail, nsteps = _dp45_py(rhs, y0, tg, tol, tol)
        meta.update(schedule="callable")
    if status != 0:
        raise IntegrationError(
            f"step size underflow at t = {t_fail:.6g}", t_fail=t_fail)
    meta["nsteps"] = int(nsteps)
    return Trajectory(tg, out, meta)


def integrate_mobile(
    s: ScheduleI,
    mobile0: MobilePair | Sequence[complex],
    t_grid: Sequence[float],
    tol: float = DEFAULT_TOL,
) -> list[tuple[float, MobilePair]]:
    """Propagate the eigenbasis amplitudes da+/dt = -Omega a-, da-/dt = Omega* a+.

    Omega(t) = -Omega0 exp(i int_0^t omega); the phase integral is evaluated
    in closed form (piecewise quadratic), never by quadrature.
    """
    tg = _validate_grid_tol(t_grid, tol)
    if isinstance(mobile0, MobilePair):
        y0 = np.array([mobile0.a_plus, mobile0.a_minus], dtype=complex)
    else:
        y0 = np.asarray(mobile0, dtype=complex)
    y0 = _state_as_array(y0)
    if s.alpha < 0:
        tc = -s.gamma / s.alpha
        head = s.gamma * tc + 0.5 * s.alpha * tc * tc
    else:
        tc, head = math.inf, 0.0
    p = np.array([s.omega0, s.alpha, s.gamma, tc, head])
    out, status, t_fail, _ = _dp45_nb(
        _MODEL_MOBILE_I, p, complex(y0[0]), complex(y0[1]), tg, tol, tol)
    if status != 0:
        raise IntegrationError(
            f"step size underflow at t = {t_fail:.6g}", t_fail=t_fail)
    return [
        (float(t), MobilePair(complex(a), complex(b), s.phase_integral(float(t))))
        for t, (a, b) in zip(tg, out)
    ]


def mobile_to_fixed(m: MobilePair, theta: float, phase: float | None = None) -> StatePair:
    """Map eigenbasis amplitudes back to (a_s, a_p).

    Applies the diagonal phases exp(-i * (+-phase/2)) accumulated by the
    instantaneous eigenstates, then the rotation U^dagger(theta).  ``phase``
    defaults to the pair's own accumulated phase integral.
    """
    if abs(m.norm2() - 1.0) > 1e-9:
        raise ValidationError("mobile amplitudes must be unit norm")
    ph = m.accumulated_phase if phase is None else phase
    up = m.a_plus * complex(math.cos(-ph / 2), math.sin(-ph / 2))
    um = m.a_minus * complex(math.cos(ph / 2), math.sin(ph / 2))
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    return StatePair(c * up - s * um, s * up + c * um)

"""Numerical cross-checks of the exact amplitudes.

Two solvers that share nothing with :mod:`qfilqu.dynamics` apart from the
model parameters:

* a pseudomode ODE.  The Lorentzian memory kernel is a single decaying
  exponential, so each convolution ``z(t) = int_0^t f(t - s) a(s) ds`` obeys
  ``dz/dt = f(0) a - lam z`` and the integro-differential equations become a
  local 4-dimensional linear ODE;
* a discretized bath.  Each reservoir is replaced by ``n_modes`` modes on a
  uniform frequency grid and the full ``2 + 2 n_modes`` Schroedinger
  equation is integrated.

Both use classical fixed-step RK4.  All frequencies are detunings from the
qubit frequency (frame rotating at the qubit frequency).
"""
from dataclasses import dataclass
import warnings

import numpy as np

from .dynamics import propagate

__all__ = [
    "rk4_step",
    "lorentzian_density",
    "lorentzian_kernel",
    "PseudomodeTrajectory",
    "pseudomode_evolve",
    "BathDiscretization",
    "discretize_bath",
    "FullState",
    "BathTrajectory",
    "discretized_bath_evolve",
    "OracleReport",
    "compare_oracles",
]


def rk4_step(f, t, y, dt):
    """One classical Runge-Kutta step for ``dy/dt = f(t, y)``."""
    k1 = f(t, y)
    k2 = f(t + 0.5 * dt, y + 0.5 * dt * k1)
    k3 = f(t + 0.5 * dt, y + 0.5 * dt * k2)
    k4 = f(t + dt, y + dt * k3)
    return y + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def lorentzian_density(params, detuning):
    """Spectral density ``gamma0 lam^2 / (2 pi (lam^2 + detuning^2))``."""
    detuning = np.asarray(detuning, dtype=float)
    lam = params.lam
    return params.gamma0 * lam * lam / (2.0 * np.pi * (lam * lam + detuning * detuning))


def lorentzian_kernel(params, s):
    """Memory kernel ``(gamma0 lam / 2) exp(-lam s)`` for ``s >= 0``.

    This is the Fourier transform of :func:`lorentzian_density` with the
    frequency integral extended over the whole real line.
    """
    s = np.asarray(s, dtype=float)
    if np.any(s < 0):
        raise ValueError("kernel lag must be non-negative")
    out = 0.5 * params.gamma0 * params.lam * np.exp(-params.lam * s)
    return out if out.ndim else float(out)


def _time_segments(t_end, dt, t_eval):
    """Output times and, for each interval between them, an equal substep count."""
    if not dt > 0 or not np.isfinite(dt):
        raise ValueError(f"dt must be positive, got {dt}")
    if t_end < 0:
        raise ValueError(f"t_end must be non-negative, got {t_end}")
    if t_eval is None:
        n = int(np.ceil(t_end / dt - 1e-9)) if t_end > 0 else 0
        times = np.linspace(0.0, t_end, n + 1)
    else:
        times = np.unique(np.concatenate([[0.0], np.asarray(t_eval, dtype=float)]))
        if times[0] < 0:
            raise ValueError("t_eval must be non-negative")
    steps = [max(int(np.ceil((hi - lo) / dt - 1e-9)), 1) for lo, hi in zip(times[:-1], times[1:])]
    return times, steps


@dataclass(frozen=True)
class PseudomodeTrajectory:
    """Amplitudes and memory integrals ``z_a``, ``z_b`` at the output times."""

    t: np.ndarray
    a: np.ndarray
    b: np.ndarray
    z_a: np.ndarray
    z_b: np.ndarray


def _pseudomode_generator(params):
    f0 = 0.5 * params.gamma0 * params.lam
    lam, J = params.lam, params.J
    # state (a, b, z_a, z_b)
    return np.array(
        [
            [0, -1j * J, -1, 0],
            [-1j * J, 0, 0, -1],
            [f0, 0, -lam, 0],
            [0, f0, 0, -lam],
        ],
        dtype=complex,
    )


def pseudomode_evolve(params, init, t_end, dt=1e-3, t_eval=None):
    """Integrate the pseudomode form of the memory equations with RK4.

    Parameters
    ----------
    params, init : ModelParams, InitialCondition
    t_end : float
        Final time; ignored when ``t_eval`` is given.
    dt : float
        Largest step; each interval between output times is split into
        equal substeps no longer than ``dt``.
    t_eval : array_like, optional
        Output times.  Defaults to every step on ``[0, t_end]``.

    Raises
    ------
    ValueError
        If ``dt <= 0``.
    FloatingPointError
        If the state becomes non-finite.
    """
    times, steps = _time_segments(t_end, dt, t_eval)
    gen = _pseudomode_generator(params)
    y = np.array([init.phased_a0, init.b0, 0.0, 0.0], dtype=complex)
    out = np.empty((len(times), 4), dtype=complex)
    out[0] = y
    propagators = {}
    for k, n in enumerate(steps):
        h = (times[k + 1] - times[k]) / n
        key = (n, h)
        if key not in propagators:
            # linear autonomous system: one RK4 step is a fixed matrix
            propagators[key] = rk4_step(lambda _t, m: gen @ m, 0.0, np.eye(4, dtype=complex), h)
        step = propagators[key]
        for _ in range(n):
            y = step @ y
        if not np.all(np.isfinite(y)):
            raise FloatingPointError(f"pseudomode state became non-finite at t={times[k + 1]}")
        out[k + 1] = y
    return PseudomodeTrajectory(times, out[:, 0], out[:, 1], out[:, 2], out[:, 3])


@dataclass(frozen=True)
class BathDiscretization:
    """Uniform grid of reservoir modes shared by both qubits.

    ``omegas`` are detunings ``omega_k - omega_0``; ``window`` is their range.
    """

    n_modes: int
    window: tuple
    omegas: np.ndarray
    gs: np.ndarray

    @property
    def spacing(self):
        return (self.window[1] - self.window[0]) / self.n_modes

    @property
    def recurrence_time(self):
        return 2.0 * np.pi / self.spacing


def discretize_bath(params, n_modes=4000, window_mult=40.0):
    """Midpoint grid over ``+/- window_mult * lam`` with ``g_k^2 = I(omega_k) d_omega``."""
    if n_modes < 1:
        raise ValueError("n_modes must be positive")
    half = window_mult * params.lam
    dw = 2.0 * half / n_modes
    omegas = -half + dw * (np.arange(n_modes) + 0.5)
    gs = np.sqrt(lorentzian_density(params, omegas) * dw)
    return BathDiscretization(n_modes, (-half, half), omegas, gs)


@dataclass(frozen=True)
class FullState:
    a: complex
    b: complex
    c: np.ndarray
    d: np.ndarray

    @property
    def norm(self):
        return abs(self.a) ** 2 + abs(self.b) ** 2 + np.sum(np.abs(self.c) ** 2) + np.sum(np.abs(self.d) ** 2)


@dataclass(frozen=True)
class BathTrajectory:
    """Qubit amplitudes and total norm at the output times, plus the final full state."""

    t: np.ndarray
    a: np.ndarray
    b: np.ndarray
    norm: np.ndarray
    final: FullState


def discretized_bath_evolve(params, init, disc, t_end, dt=1e-3, t_eval=None):
    """RK4 integration of both qubits coupled to discrete reservoirs.

    Equations (detuning ``w_k``, coupling ``g_k``)::

        da/dt   = -i J b - i sum_k g_k c_k
        db/dt   = -i J a - i sum_k g_k d_k
        dc_k/dt = -i w_k c_k - i g_k a
        dd_k/dt = -i w_k d_k - i g_k b

    Warns when the final time exceeds the grid recurrence time.
    """
    times, steps = _time_segments(t_end, dt, t_eval)
    w_max = np.max(np.abs(disc.omegas)) if disc.n_modes else 0.0
    h_max = max(((hi - lo) / n for lo, hi, n in zip(times[:-1], times[1:], steps)), default=0.0)
    if h_max * w_max >= 0.1:
        raise ValueError(f"dt * max detuning = {h_max * w_max:.3g} must be below 0.1")
    if times[-1] > disc.recurrence_time:
        warnings.warn(
            f"t_end={times[-1]:.3g} exceeds the bath recurrence time {disc.recurrence_time:.3g}",
            RuntimeWarning,
            stacklevel=2,
        )

    n = disc.n_modes
    g = disc.gs.astype(complex)
    mw = -1j * disc.omegas
    J = params.J

    def rhs(_t, y):
        a, b = y[0], y[1]
        c, d = y[2 : 2 + n], y[2 + n :]
        out = np.empty_like(y)
        out[0] = -1j * (J * b + g @ c)
        out[1] = -1j * (J * a + g @ d)
        out[2 : 2 + n] = mw * c - 1j * g * a
        out[2 + n :] = mw * d - 1j * g * b
        return out

    y = np.zeros(2 + 2 * n, dtype=complex)
    y[0], y[1] = init.phased_a0, init.b0
    a_out = np.empty(len(times), dtype=complex)
    b_out = np.empty(len(times), dtype=complex)
    norm = np.empty(len(times))
    a_out[0], b_out[0], norm[0] = y[0], y[1], np.vdot(y, y).real
    t = 0.0
    for k, m in enumerate(steps):
        h = (times[k + 1] - times[k]) / m
        for _ in range(m):
            y = rk4_step(rhs, t, y, h)
            t += h
        if not np.all(np.isfinite(y)):
            raise FloatingPointError(f"bath state became non-finite at t={times[k + 1]}")
        t = times[k + 1]
        a_out[k + 1], b_out[k + 1], norm[k + 1] = y[0], y[1], np.vdot(y, y).real
    final = FullState(complex(y[0]), complex(y[1]), y[2 : 2 + n].copy(), y[2 + n :].copy())
    return BathTrajectory(times, a_out, b_out, norm, final)


@dataclass(frozen=True)
class OracleReport:
    """Max and RMS amplitude deviations between the three solutions.

    ``errors`` maps a pair name (``analytic_vs_pseudomode``,
    ``analytic_vs_bath``, ``pseudomode_vs_bath``) to ``{"max": .., "rms": ..}``.
    The deviation at one time is ``max(|a1 - a2|, |b1 - b2|)``.
    """

    t: np.ndarray
    errors: dict

    def max_error(self, pair):
        return self.errors[pair]["max"]


def _deviation(a1, b1, a2, b2):
    dev = np.maximum(np.abs(a1 - a2), np.abs(b1 - b2))
    return {"max": float(dev.max()), "rms": float(np.sqrt(np.mean(dev * dev)))}


def compare_oracles(params, init, t_grid, dt=1e-3, n_modes=4000, window_mult=40.0, bath_dt=None):
    """Evaluate analytic, pseudomode and discretized-bath amplitudes on ``t_grid``."""
    t_grid = np.unique(np.asarray(t_grid, dtype=float))
    exact = [propagate(params, init, t) for t in t_grid]
    a_ex = np.array([s.a for s in exact])
    b_ex = np.array([s.b for s in exact])

    pm = pseudomode_evolve(params, init, t_grid[-1], dt, t_eval=t_grid)
    disc = discretize_bath(params, n_modes, window_mult)
    bath = discretized_bath_evolve(params, init, disc, t_grid[-1], bath_dt or dt, t_eval=t_grid)
    # trajectories prepend t = 0; keep only the requested times
    sel_pm = np.searchsorted(pm.t, t_grid)
    sel_bath = np.searchsorted(bath.t, t_grid)
    a_pm, b_pm = pm.a[sel_pm], pm.b[sel_pm]
    a_bath, b_bath = bath.a[sel_bath], bath.b[sel_bath]
    return OracleReport(
        t_grid,
        {
            "analytic_vs_pseudomode": _deviation(a_ex, b_ex, a_pm, b_pm),
            "analytic_vs_bath": _deviation(a_ex, b_ex, a_bath, b_bath),
            "pseudomode_vs_bath": _deviation(a_pm, b_pm, a_bath, b_bath),
        },
    )

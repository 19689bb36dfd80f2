"""Exact single-excitation dynamics of two hopping-coupled qubits.

Each qubit decays into its own zero-temperature reservoir with a Lorentzian
spectral density centred on the (common) qubit frequency.  Everything is
expressed in the frame rotating at the qubit frequency, so the carrier
frequency never appears in the numerics.  Basis order for two-qubit
operators is ``|ee>, |eg>, |ge>, |gg>``.

All observables of the reduced state factor through the complex survival
amplitude ``x(t)``; see :func:`compute_x`.
"""
from dataclasses import dataclass

import numpy as np

__all__ = [
    "DegenerateStateError",
    "ModelParams",
    "InitialCondition",
    "AmplitudeState",
    "compute_d",
    "compute_h",
    "compute_x",
    "propagate",
    "reduced_density",
    "density_derivative",
    "check_density",
    "bell_init",
]

_SERIES_THRESHOLD = 1e-6


class DegenerateStateError(ValueError):
    """The excitation has fully decayed; the quantity is defined by continuity.

    The continuity value is available as ``err.value``.
    """

    def __init__(self, message, value=0.0):
        super().__init__(message)
        self.value = value


@dataclass(frozen=True)
class ModelParams:
    """Physical rates of the model, all in units of inverse time.

    Parameters
    ----------
    gamma0 : float
        System decay rate; ``gamma0 = 1`` fixes the time unit.
    lam : float
        Spectral width of the Lorentzian (reservoir correlation time ``1/lam``).
    J : float
        Qubit-qubit hopping strength.
    """

    gamma0: float = 1.0
    lam: float = 0.1
    J: float = 0.0

    def __post_init__(self):
        if not (np.isfinite(self.gamma0) and self.gamma0 > 0):
            raise ValueError(f"gamma0 must be positive, got {self.gamma0}")
        if not (np.isfinite(self.lam) and self.lam > 0):
            raise ValueError(f"lam must be positive, got {self.lam}")
        if not np.isfinite(self.J):
            raise ValueError(f"J must be finite, got {self.J}")


@dataclass(frozen=True)
class InitialCondition:
    """Probe state ``a0 e^{i theta}|eg> + b0 |ge>`` with empty reservoirs."""

    a0: complex
    b0: complex
    theta: float = 0.0

    def __post_init__(self):
        norm = abs(self.a0) ** 2 + abs(self.b0) ** 2
        if abs(norm - 1.0) > 1e-12:
            raise ValueError(f"|a0|^2 + |b0|^2 must be 1, got {norm!r}")

    @classmethod
    def from_a0(cls, a0, theta=0.0):
        """Real amplitudes with ``b0 = sqrt(1 - a0**2)``."""
        if not 0.0 <= a0 <= 1.0:
            raise ValueError(f"a0 must lie in [0, 1], got {a0}")
        return cls(a0, float(np.sqrt(1.0 - a0 * a0)), theta)

    @property
    def phased_a0(self):
        return self.a0 * np.exp(1j * self.theta)


def bell_init(theta=0.0):
    """``(|eg> + |ge>)/sqrt(2)`` with the phase imprinted on ``|eg>``."""
    r = 1.0 / np.sqrt(2.0)
    return InitialCondition(r, r, theta)


@dataclass(frozen=True)
class AmplitudeState:
    """Amplitudes of ``|eg>`` and ``|ge>`` at time ``t`` and their phase derivatives."""

    t: float
    a: complex
    b: complex
    x: complex
    da_dtheta: complex
    db_dtheta: complex

    @property
    def excited_population(self):
        """``|a|^2 + |b|^2``, the nonzero eigenvalue paired with ``|gg>``."""
        return abs(self.a) ** 2 + abs(self.b) ** 2


def compute_d(params):
    """Principal square root of ``-J^2 - 2iJ lam + lam (lam - 2 gamma0)``."""
    lam, J = params.lam, params.J
    # "+ 0.0" turns -0.0 into +0.0 so that J = 0 lands on the principal branch
    radicand = complex(-J * J + lam * (lam - 2.0 * params.gamma0), -2.0 * J * lam + 0.0)
    return complex(np.sqrt(radicand))


def compute_h(params, t, d=None):
    """``cosh(dt/2) + (lam - iJ) sinh(dt/2)/d``.

    ``d`` defaults to :func:`compute_d`; either square-root branch gives the
    same value.  ``sinh(dt/2)/d`` is replaced by its Taylor series when
    ``|d t| < 1e-6`` so that ``d = 0`` is handled exactly.
    """
    if d is None:
        d = compute_d(params)
    half = 0.5 * d * t
    if abs(d * t) < _SERIES_THRESHOLD:
        half_sq = half * half
        sinhc = 0.5 * t * (1.0 + half_sq / 6.0 + half_sq * half_sq / 120.0)
    else:
        sinhc = np.sinh(half) / d
    return complex(np.cosh(half) + (params.lam - 1j * params.J) * sinhc)


def compute_x(params, t):
    """Survival amplitude ``x(t) = exp(-(lam + iJ) t/2) h(t)``."""
    if t < 0:
        raise ValueError(f"t must be non-negative, got {t}")
    envelope = np.exp(-0.5 * (params.lam + 1j * params.J) * t)
    return complex(envelope * compute_h(params, t))


def propagate(params, init, t):
    """Evaluate the exact amplitudes at time ``t``.

    Symmetric and antisymmetric combinations ``a +/- b`` evolve with ``x``
    and ``conj(x)`` respectively, which gives

        a = Re(x) a0 e^{i theta} + i Im(x) b0
        b = i Im(x) a0 e^{i theta} + Re(x) b0
    """
    if t < 0:
        raise ValueError(f"t must be non-negative, got {t}")
    x = compute_x(params, t)
    pa = init.phased_a0
    re, im = x.real, 1j * x.imag
    return AmplitudeState(
        t=float(t),
        a=re * pa + im * init.b0,
        b=im * pa + re * init.b0,
        x=x,
        da_dtheta=re * 1j * pa,
        db_dtheta=im * 1j * pa,
    )


def reduced_density(state):
    """Two-qubit density matrix after tracing out both reservoirs."""
    a, b = state.a, state.b
    rho = np.zeros((4, 4), dtype=complex)
    rho[1, 1] = abs(a) ** 2
    rho[1, 2] = a * np.conj(b)
    rho[2, 1] = b * np.conj(a)
    rho[2, 2] = abs(b) ** 2
    rho[3, 3] = 1.0 - rho[1, 1].real - rho[2, 2].real
    return rho


def density_derivative(state):
    """Analytic ``d rho / d theta`` built from the stored amplitude derivatives."""
    a, b = state.a, state.b
    da, db = state.da_dtheta, state.db_dtheta
    drho = np.zeros((4, 4), dtype=complex)
    drho[1, 1] = 2.0 * (np.conj(a) * da).real
    drho[2, 2] = 2.0 * (np.conj(b) * db).real
    drho[1, 2] = da * np.conj(b) + a * np.conj(db)
    drho[2, 1] = np.conj(drho[1, 2])
    drho[3, 3] = -(drho[1, 1] + drho[2, 2])
    return drho


def check_density(rho, atol=1e-12, psd_tol=1e-10):
    """Raise ``ValueError`` unless ``rho`` is a 4x4 Hermitian, unit-trace, PSD matrix."""
    rho = np.asarray(rho)
    if rho.shape != (4, 4):
        raise ValueError(f"expected a 4x4 matrix, got shape {rho.shape}")
    if np.max(np.abs(rho - rho.conj().T)) > atol:
        raise ValueError("density matrix is not Hermitian")
    if abs(np.trace(rho) - 1.0) > atol:
        raise ValueError(f"density matrix trace is {np.trace(rho)!r}")
    if np.linalg.eigvalsh(rho).min() < -psd_tol:
        raise ValueError("density matrix has a negative eigenvalue")
    return rho

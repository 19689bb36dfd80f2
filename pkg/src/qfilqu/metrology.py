"""Quantum Fisher information of the imprinted phase, and the Cramer-Rao bound.

Three independent routes are provided:

* :func:`qfi_closed` -- ``4 |a0 b0|^2 |x|^2``;
* :func:`qfi_amplitude` -- ``4 |b da - a db|^2 / (|a|^2 + |b|^2)`` from the
  evolved amplitudes and their phase derivatives;
* :func:`qfi_spectral` -- the general eigen-expansion of the SLD formula,
  valid for any density matrix including rank-deficient ones.
"""
from dataclasses import dataclass

import numpy as np

from .dynamics import DegenerateStateError
from .linalg import HERMITIAN_REJECT_TOL, NonHermitianError, eigh

__all__ = [
    "QfiResult",
    "DegenerateStateError",
    "qfi_closed",
    "qfi_amplitude",
    "qfi_spectral",
    "spectral_terms",
    "pure_state_qfi",
    "cramer_rao",
]

RANK_THRESHOLD = 1e-12
DEGENERATE_POPULATION = 1e-14


@dataclass(frozen=True)
class QfiResult:
    value: float
    method: str

    def __float__(self):
        return float(self.value)


def qfi_closed(init, x):
    """QFI from the initial amplitudes and the survival amplitude ``x``."""
    value = 4.0 * abs(init.a0 * init.b0) ** 2 * abs(x) ** 2
    return QfiResult(float(value), "closed_form")


def qfi_amplitude(state):
    """QFI from the evolved amplitudes and their analytic phase derivatives.

    Raises
    ------
    DegenerateStateError
        If ``|a|^2 + |b|^2 <= 1e-14`` (the QFI is then 0).
    """
    lam1 = state.excited_population
    if lam1 <= DEGENERATE_POPULATION:
        raise DegenerateStateError(f"excited population {lam1:.3e} is zero", 0.0)
    num = abs(state.b * state.da_dtheta - state.a * state.db_dtheta) ** 2
    return QfiResult(float(4.0 * num / lam1), "amplitude_formula")


def spectral_terms(rho, drho, threshold=RANK_THRESHOLD):
    """Split the spectral QFI into eigenvalue-change and eigenvector-rotation parts.

    With ``M = V^H drho V`` in the eigenbasis of ``rho``,
    the diagonal ``M_ii`` is ``d lambda_i`` and the off-diagonal part encodes
    ``(lambda_j - lambda_i) <phi_i|d phi_j>``.  Returns
    ``(population_term, rotation_term)``.
    """
    w, v = eigh(rho)
    m = v.conj().T @ drho @ v
    w = np.where(w < threshold, 0.0, w)

    diag = np.real(np.diag(m))
    keep = w > threshold
    population = float(np.sum(diag[keep] ** 2 / w[keep]))

    denom = w[:, None] + w[None, :]
    mask = denom > threshold
    np.fill_diagonal(mask, False)
    rotation = float(np.sum(2.0 * np.abs(m[mask]) ** 2 / denom[mask]))
    return population, rotation


def qfi_spectral(rho_theta, drho_dtheta):
    """QFI of an arbitrary 4x4 state from its eigendecomposition.

    Eigenvalues below ``1e-12`` are treated as zero and pairs with
    ``lambda_i + lambda_j < 1e-12`` are skipped, which reproduces the
    rank-deficient form of the formula.
    """
    drho = np.asarray(drho_dtheta, dtype=complex)
    if np.max(np.abs(drho - drho.conj().T)) > HERMITIAN_REJECT_TOL:
        raise NonHermitianError("d rho / d theta is not Hermitian")
    if abs(np.trace(drho)) > 1e-10:
        raise ValueError(f"d rho / d theta must be traceless, trace is {np.trace(drho)!r}")
    population, rotation = spectral_terms(rho_theta, drho)
    return QfiResult(population + rotation, "spectral")


def pure_state_qfi(phi, dphi):
    """``4 (<dphi|dphi> - |<phi|dphi>|^2)`` for a normalized pure state."""
    phi = np.asarray(phi, dtype=complex)
    dphi = np.asarray(dphi, dtype=complex)
    return float(4.0 * (np.vdot(dphi, dphi).real - abs(np.vdot(phi, dphi)) ** 2))


def cramer_rao(f, n_repeats=1):
    """Best achievable phase uncertainty ``1/sqrt(N F)``."""
    if n_repeats < 1 or int(n_repeats) != n_repeats:
        raise ValueError(f"n_repeats must be a positive integer, got {n_repeats}")
    value = float(f)
    if value <= 0:
        raise ValueError("zero QFI: the estimator variance is unbounded")
    return 1.0 / np.sqrt(n_repeats * value)

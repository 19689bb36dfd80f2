"""Skew information and local quantum uncertainty (LQU) with respect to qubit A.

Local observables are ``K = n . sigma (x) I`` with a unit Bloch vector ``n``;
for such ``K`` the skew information is ``1 - n^T W n`` where ``W`` is the
3x3 matrix returned by :func:`w_matrix`, so the LQU is ``1 - lambda_max(W)``.
"""
from dataclasses import dataclass

import numpy as np

from .dynamics import DegenerateStateError
from .linalg import eigh, psd_sqrt

__all__ = [
    "LquResult",
    "LocalObservable",
    "PAULI",
    "LOCAL_PAULI",
    "skew_information",
    "w_matrix",
    "lqu_w_matrix",
    "lqu_closed",
    "lqu_brute_force",
    "fibonacci_sphere",
]

# single-qubit Paulis in the (|e>, |g>) basis
PAULI = np.array(
    [
        [[0, 1], [1, 0]],
        [[0, -1j], [1j, 0]],
        [[1, 0], [0, -1]],
    ],
    dtype=complex,
)
LOCAL_PAULI = np.array([np.kron(s, np.eye(2)) for s in PAULI])


@dataclass(frozen=True)
class LquResult:
    value: float
    w1: float
    w2: float
    method: str

    def __float__(self):
        return float(self.value)


@dataclass(frozen=True)
class LocalObservable:
    """``n . sigma`` on qubit A, identity on qubit B."""

    bloch: tuple

    def __post_init__(self):
        n = np.asarray(self.bloch, dtype=float)
        if n.shape != (3,):
            raise ValueError("Bloch vector must have three components")
        if abs(np.linalg.norm(n) - 1.0) > 1e-12:
            raise ValueError(f"Bloch vector must be a unit vector, |n| = {np.linalg.norm(n)!r}")
        object.__setattr__(self, "bloch", tuple(float(c) for c in n))

    @classmethod
    def from_angles(cls, polar, azimuth):
        return cls(
            (
                np.sin(polar) * np.cos(azimuth),
                np.sin(polar) * np.sin(azimuth),
                np.cos(polar),
            )
        )

    @property
    def operator(self):
        return np.tensordot(np.asarray(self.bloch), LOCAL_PAULI, axes=1)


def skew_information(rho, k):
    """Wigner-Yanase skew information ``-1/2 Tr([sqrt(rho), K]^2)``.

    ``k`` may be a :class:`LocalObservable` or any Hermitian 4x4 operator.
    Round-off negatives down to ``-1e-10`` are clamped to zero.
    """
    op = k.operator if isinstance(k, LocalObservable) else np.asarray(k, dtype=complex)
    s = psd_sqrt(rho)
    value = np.trace(rho @ op @ op).real - np.trace(s @ op @ s @ op).real
    if value < -1e-10:
        raise ValueError(f"negative skew information {value:.3e}")
    return max(float(value), 0.0)


def w_matrix(rho):
    """Real symmetric ``W_ij = Re Tr(sqrt(rho) s_i sqrt(rho) s_j)``, ``s_i`` acting on A."""
    s = psd_sqrt(rho)
    half = np.einsum("ab,ibc->iac", s, LOCAL_PAULI)
    w = np.einsum("iab,jba->ij", half, half)
    w = w.real
    return 0.5 * (w + w.T)


def lqu_w_matrix(rho):
    """LQU as one minus the largest eigenvalue of :func:`w_matrix`.

    ``w1`` and ``w2`` of the result hold the largest and second-largest
    eigenvalues.
    """
    w = eigh(w_matrix(rho)).eigenvalues
    return LquResult(float(1.0 - w[-1]), float(w[-1]), float(w[-2]), "w_matrix")


def lqu_closed(state):
    """Closed-form LQU ``1 - max(W1, W2)`` for the evolved state.

    ``W1 = 2|a|^2 sqrt(lam2/lam1)`` and ``W2 = 1 - 4|ab|^2/lam1`` with
    ``lam1 = |a|^2 + |b|^2`` and ``lam2 = 1 - lam1``.

    Raises
    ------
    DegenerateStateError
        If ``lam1 <= 1e-14``; the state is then ``|gg>`` and the LQU is 0.
    """
    lam1 = state.excited_population
    if lam1 <= 1e-14:
        raise DegenerateStateError(f"excited population {lam1:.3e} is zero", 0.0)
    lam2 = 1.0 - lam1
    # same rank cut as psd_sqrt: round-off in lam2 would otherwise leak through the square root
    if lam2 <= 4.0 * np.finfo(float).eps:
        lam2 = 0.0
    pa, pb = abs(state.a) ** 2, abs(state.b) ** 2
    w1 = 2.0 * pa * np.sqrt(lam2 / lam1)
    w2 = 1.0 - 4.0 * pa * pb / lam1
    return LquResult(float(1.0 - max(w1, w2)), float(w1), float(w2), "closed_form")


def fibonacci_sphere(n_points):
    """Deterministic, nearly uniform unit vectors, shape ``(n_points, 3)``."""
    i = np.arange(n_points) + 0.5
    z = 1.0 - 2.0 * i / n_points
    r = np.sqrt(np.clip(1.0 - z * z, 0.0, None))
    phi = np.pi * (3.0 - np.sqrt(5.0)) * i
    return np.column_stack([r * np.cos(phi), r * np.sin(phi), z])


def lqu_brute_force(rho, grid_resolution=128):
    """Minimum skew information over ``grid_resolution**2`` Bloch directions.

    The grid minimum is an upper bound on the exact LQU.  ``w1``/``w2`` of the
    result are ``nan``.
    """
    if grid_resolution < 32:
        raise ValueError("grid_resolution must be at least 32")
    dirs = fibonacci_sphere(grid_resolution * grid_resolution)
    s = psd_sqrt(rho)
    ops = np.einsum("ki,iab->kab", dirs, LOCAL_PAULI)
    sk = np.einsum("ab,kbc->kac", s, ops)
    rho_k2 = np.einsum("ab,kbc,kca->k", rho, ops, ops).real
    cross = np.einsum("kab,kba->k", sk, sk).real
    skew = np.clip(rho_k2 - cross, 0.0, None)
    return LquResult(float(skew.min()), float("nan"), float("nan"), "brute_force")

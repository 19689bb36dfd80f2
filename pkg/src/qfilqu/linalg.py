"""Small dense Hermitian eigensolver and PSD square root.

The eigensolver is a cyclic complex Jacobi iteration.  It is slower than
LAPACK but behaves predictably near degenerate spectra, which is the common
case here (the reduced states have a doubly-degenerate zero eigenvalue).
"""
from typing import NamedTuple

import numpy as np

__all__ = ["EigenDecomposition", "NonHermitianError", "eigh", "psd_sqrt"]

HERMITIAN_REJECT_TOL = 1e-8
NEGATIVE_REJECT_TOL = 1e-8

_MAX_SWEEPS = 64


class NonHermitianError(ValueError):
    pass


class EigenDecomposition(NamedTuple):
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self):
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T


def _as_hermitian(m):
    m = np.array(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] not in (3, 4):
        raise ValueError(f"expected a 3x3 or 4x4 matrix, got shape {m.shape}")
    defect = np.max(np.abs(m - m.conj().T))
    if defect > HERMITIAN_REJECT_TOL:
        raise NonHermitianError(f"matrix is not Hermitian (defect {defect:.3e})")
    return 0.5 * (m + m.conj().T)


def _fix_phase(v):
    # first component with non-negligible modulus made real positive
    for k in range(v.shape[0]):
        if abs(v[k]) > 1e-12:
            return v * (abs(v[k]) / v[k])
    return v


def eigh(m):
    """Eigendecomposition of a 3x3 or 4x4 Hermitian matrix.

    Returns eigenvalues in ascending order and orthonormal eigenvectors as
    columns.  Each eigenvector's first non-negligible component is real and
    positive.

    Raises
    ------
    NonHermitianError
        If ``max |m - m^H| > 1e-8``.
    """
    a = _as_hermitian(m)
    n = a.shape[0]
    v = np.eye(n, dtype=complex)
    scale = max(np.linalg.norm(a), 1e-300)
    target = (1e-15 * scale) ** 2

    for _ in range(_MAX_SWEEPS):
        off = np.sum(np.abs(np.triu(a, 1)) ** 2)
        if off <= target:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                r = abs(apq)
                if r <= 1e-300:
                    continue
                phase = apq / r
                angle = 0.5 * np.arctan2(2.0 * r, (a[q, q] - a[p, p]).real)
                c, s = np.cos(angle), np.sin(angle)
                # rotation R = diag(1, conj(phase)) @ [[c, s], [-s, c]] on (p, q)
                rot = np.eye(n, dtype=complex)
                rot[p, p] = c
                rot[p, q] = s
                rot[q, p] = -s * np.conj(phase)
                rot[q, q] = c * np.conj(phase)
                a = rot.conj().T @ a @ rot
                a[p, q] = a[q, p] = 0.0
                v = v @ rot

    w = np.real(np.diag(a)).copy()
    order = np.argsort(w, kind="stable")
    w = w[order]
    v = v[:, order]
    v = np.column_stack([_fix_phase(v[:, k]) for k in range(n)])
    return EigenDecomposition(w, v)


def psd_sqrt(m):
    """Hermitian PSD square root ``S`` with ``S @ S == m``.

    Eigenvalues down to ``-1e-8`` are treated as round-off and clamped to zero.
    Eigenvalues below the numerical-rank tolerance ``dim * eps * max|w|`` are
    also zeroed: the square root would otherwise inflate ``1e-17`` noise on an
    exact zero to ``3e-9``.
    """
    w, v = eigh(m)
    if w[0] < -NEGATIVE_REJECT_TOL:
        raise ValueError(f"matrix is not positive semidefinite (min eigenvalue {w[0]:.3e})")
    rank_tol = len(w) * np.finfo(float).eps * max(np.max(np.abs(w)), 1e-300)
    root = np.sqrt(np.where(w > rank_tol, w, 0.0))
    s = (v * root) @ v.conj().T
    return 0.5 * (s + s.conj().T)

"""QFI versus LQU: differences, the decoupled-qubit inequality chain, random scans.

With ``F`` the QFI and ``U`` the LQU,

    delta1 = F - U        delta2 = 2U - F

For ``J = 0`` both are non-negative, with ``max delta1 = 1/4``.  For a Bell
probe ``U <= F`` holds for any ``J`` while ``F <= 2U`` can fail.
"""
from dataclasses import dataclass, field

import numpy as np

from .dynamics import DegenerateStateError, InitialCondition, ModelParams, bell_init, propagate
from .correlations import lqu_closed
from .metrology import qfi_closed

__all__ = [
    "BoundSample",
    "ScanConfig",
    "DeltaSurfacePoint",
    "BoundViolationError",
    "CONSTRAINTS",
    "DEFAULT_RANGES",
    "PRNG_NAME",
    "evaluate_sample",
    "delta_surface",
    "delta_grid",
    "extremize_deltas",
    "monte_carlo_scan",
    "precision_bound",
    "guarantees_lqu_below_qfi",
]

CONSTRAINTS = ("j_zero", "bell_init", "unconstrained")
DEFAULT_RANGES = {
    "lam": (0.01, 2.0),
    "t": (0.0, 20.0),
    "a0": (0.0, 1.0),
    "theta": (0.0, 2.0 * np.pi),
    "J": (0.0, 3.0),
}
PRNG_NAME = "numpy.random.Philox (Philox4x64-10)"


class BoundViolationError(AssertionError):
    """A bound that is guaranteed analytically failed numerically."""


@dataclass(frozen=True)
class BoundSample:
    params: ModelParams
    init: InitialCondition
    t: float
    qfi: float
    lqu: float
    delta1: float
    delta2: float
    degenerate: bool = False


@dataclass(frozen=True)
class ScanConfig:
    """Random-parameter scan; ``gamma0 = 1`` throughout.

    ``ranges`` maps ``lam``, ``t``, ``a0``, ``theta`` and ``J`` to half-open
    sampling intervals; missing keys fall back to :data:`DEFAULT_RANGES`.
    """

    n_samples: int = 10_000
    seed: int = 0
    constraint: str = "j_zero"
    ranges: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.n_samples < 1:
            raise ValueError("n_samples must be at least 1")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        if self.constraint not in CONSTRAINTS:
            raise ValueError(f"unknown constraint {self.constraint!r}; expected one of {CONSTRAINTS}")
        for key, (lo, hi) in self.ranges.items():
            if key not in DEFAULT_RANGES:
                raise ValueError(f"unknown range key {key!r}")
            if not hi >= lo:
                raise ValueError(f"empty range for {key}: ({lo}, {hi})")

    def resolved_ranges(self):
        return {**DEFAULT_RANGES, **self.ranges}


@dataclass(frozen=True)
class DeltaSurfacePoint:
    """Decoupled-qubit differences at ``m = |a0|^2``, ``n = |x0|^2``.

    ``delta1``/``delta2`` are branch-aware (they use ``U = min(U1, U2)``);
    ``raw_delta1``/``raw_delta2`` use ``U1`` unconditionally.
    """

    m: float
    n: float
    delta1: float
    delta2: float
    raw_delta1: float
    raw_delta2: float
    branch: str


def evaluate_sample(params, init, t):
    """QFI, LQU and their differences at one parameter point.

    Raises
    ------
    DegenerateStateError
        If the excitation has fully decayed.
    """
    state = propagate(params, init, t)
    qfi = qfi_closed(init, state.x).value
    lqu = lqu_closed(state).value
    return BoundSample(params, init, float(t), qfi, lqu, qfi - lqu, 2.0 * lqu - qfi)


def _surface(m, n):
    s = np.sqrt(np.clip(n * (1.0 - n), 0.0, None))
    u1 = 1.0 - 2.0 * m * s
    u2 = 4.0 * m * (1.0 - m) * n
    return u1, u2


def delta_surface(m, n):
    if not (0.0 <= m <= 1.0 and 0.0 <= n <= 1.0):
        raise ValueError("m and n must lie in [0, 1]")
    u1, u2 = _surface(m, n)
    u = min(u1, u2)
    return DeltaSurfacePoint(
        m=float(m),
        n=float(n),
        delta1=float(u2 - u),
        delta2=float(2.0 * u - u2),
        raw_delta1=float(u2 - u1),
        raw_delta2=float(2.0 * u1 - u2),
        branch="U1" if u1 < u2 else "U2",
    )


def delta_grid(resolution):
    """Branch-aware ``delta1``, ``delta2`` on a ``resolution x resolution`` grid.

    Returns ``(m, n, delta1, delta2, u1_active)`` as 2-D arrays indexed ``[i_m, i_n]``.
    """
    if resolution < 2:
        raise ValueError("resolution must be at least 2")
    axis = np.linspace(0.0, 1.0, resolution)
    m, n = np.meshgrid(axis, axis, indexing="ij")
    u1, u2 = _surface(m, n)
    u = np.minimum(u1, u2)
    return m, n, u2 - u, 2.0 * u - u2, u1 < u2


def extremize_deltas(resolution=2001):
    """Grid maximum of ``delta1`` and minimum of ``delta2`` over the U1-active region."""
    m, n, d1, d2, active = delta_grid(resolution)
    i1 = np.unravel_index(np.argmax(d1), d1.shape)
    masked = np.where(active, d2, np.inf)
    i2 = np.unravel_index(np.argmin(masked), d2.shape)
    return {
        "resolution": resolution,
        "max_delta1": float(d1[i1]),
        "argmax_delta1": [float(m[i1]), float(n[i1])],
        "min_delta2": float(masked[i2]),
        "argmin_delta2": [float(m[i2]), float(n[i2])],
        "min_delta2_all": float(d2.min()),
    }


def _draw(config):
    r = config.resolved_ranges()
    rng = np.random.Generator(np.random.Philox(config.seed))
    # one row per sample so that a scan is a prefix of any longer scan
    u = rng.random((config.n_samples, 5))

    def scale(col, key):
        lo, hi = r[key]
        return lo + (hi - lo) * u[:, col]

    draws = {
        "lam": scale(0, "lam"),
        "t": scale(1, "t"),
        "a0": scale(2, "a0"),
        "theta": scale(3, "theta"),
        "J": scale(4, "J"),
    }
    if config.constraint == "j_zero":
        draws["J"] = np.zeros(config.n_samples)
    elif config.constraint == "bell_init":
        draws["a0"] = np.full(config.n_samples, 1.0 / np.sqrt(2.0))
    return draws


def monte_carlo_scan(config):
    """Evaluate ``config.n_samples`` random parameter points in index order.

    Samples whose excitation has decayed below ``|x|^2 = 1e-14`` (common for
    broad baths at late times) keep the closed-form QFI, take ``lqu = 0`` by
    continuity and are flagged ``degenerate``.
    """
    draws = _draw(config)
    bell = bell_init()
    samples = []
    for i in range(config.n_samples):
        params = ModelParams(1.0, float(draws["lam"][i]), float(draws["J"][i]))
        if config.constraint == "bell_init":
            init = InitialCondition(bell.a0, bell.b0, float(draws["theta"][i]))
        else:
            init = InitialCondition.from_a0(float(draws["a0"][i]), float(draws["theta"][i]))
        t = float(draws["t"][i])
        try:
            samples.append(evaluate_sample(params, init, t))
        except DegenerateStateError as err:
            qfi = qfi_closed(init, propagate(params, init, t).x).value
            lqu = err.value
            samples.append(BoundSample(params, init, t, qfi, lqu, qfi - lqu, 2.0 * lqu - qfi, degenerate=True))
    return samples


def guarantees_lqu_below_qfi(sample, atol=1e-12):
    """True for decoupled qubits or a Bell probe, where ``U <= F`` is proven."""
    bell = abs(abs(sample.init.a0) - abs(sample.init.b0)) <= atol
    return sample.params.J == 0 or bell


def precision_bound(sample):
    """Worst-case best precision ``1/sqrt(U)`` implied by the LQU.

    When the sample belongs to a class with ``U <= F`` the Cramer-Rao
    precision ``1/sqrt(F)`` is checked against it.
    """
    if sample.lqu <= 0:
        raise ValueError("LQU is zero: the precision bound is vacuous")
    bound = 1.0 / np.sqrt(sample.lqu)
    if guarantees_lqu_below_qfi(sample):
        # compare U <= F directly; 1/sqrt amplifies round-off when F is tiny
        if sample.qfi < sample.lqu - 1e-12:
            raise BoundViolationError(
                f"1/sqrt(F) exceeds 1/sqrt(U) (F={sample.qfi!r}, U={sample.lqu!r})"
            )
    return float(bound)

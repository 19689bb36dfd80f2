"""Phase estimation with two coupled qubits in Lorentzian (non-Markovian) baths.

Exact dynamics, quantum Fisher information, local quantum uncertainty, the
inequalities between them, and ODE oracles for the analytic solution.
"""
__version__ = "0.1.0"

from .dynamics import (
    AmplitudeState,
    DegenerateStateError,
    InitialCondition,
    ModelParams,
    bell_init,
    compute_d,
    compute_h,
    compute_x,
    density_derivative,
    propagate,
    reduced_density,
)
from .linalg import eigh, psd_sqrt
from .metrology import QfiResult, cramer_rao, qfi_amplitude, qfi_closed, qfi_spectral
from .correlations import (
    LocalObservable,
    LquResult,
    lqu_brute_force,
    lqu_closed,
    lqu_w_matrix,
    skew_information,
    w_matrix,
)
from .bounds import (
    BoundSample,
    ScanConfig,
    delta_surface,
    evaluate_sample,
    extremize_deltas,
    monte_carlo_scan,
    precision_bound,
)
from .oracle import (
    compare_oracles,
    discretize_bath,
    discretized_bath_evolve,
    lorentzian_kernel,
    pseudomode_evolve,
)

"""
QFI and LQU of two coupled qubits in Lorentzian baths
=====================================================

Each qubit decays into its own reservoir while an XY exchange of strength J
moves the excitation back and forth.  The phase theta is imprinted on the
excited component of qubit A.

"""

import numpy as np

from qfilqu import InitialCondition, ModelParams, bell_init, compute_x, lqu_closed, propagate, qfi_closed

# Bell probe, moderately narrow bath
params = ModelParams(gamma0=1.0, lam=0.15, J=1.5)
init = bell_init(theta=0.0)

print("   t      |x|^2      QFI       LQU")
for t in np.linspace(0, 10, 11):
    state = propagate(params, init, t)
    print(f"{t:5.1f}  {abs(state.x) ** 2:9.5f} {qfi_closed(init, state.x).value:9.5f} {lqu_closed(state).value:9.5f}")

# The QFI depends only on |a0 b0|^2 |x|^2, so a stronger exchange protects it
# exactly as much as it protects the excited population.
for J in (0.3, 1.5, 3.0):
    x = compute_x(ModelParams(1.0, 0.15, J), 5.0)
    print(f"J = {J:3.1f}: QFI(t=5) = {qfi_closed(init, x).value:.4f}")

# A narrower bath (smaller lam) means longer memory and slower decay.
probe = InitialCondition.from_a0(0.5)
for lam in (0.05, 0.2, 1.0):
    x = compute_x(ModelParams(1.0, lam, 1.5), 5.0)
    print(f"lam = {lam:4.2f}: QFI(t=5) = {qfi_closed(probe, x).value:.4f}")

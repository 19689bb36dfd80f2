"""
How far apart can QFI and LQU be?
=================================

For decoupled qubits U <= F <= 2U holds on every state of the family and
F - U never exceeds 1/4.  A Bell probe with exchange keeps U <= F but can
break F <= 2U.

"""

import numpy as np

from qfilqu import ScanConfig, delta_surface, extremize_deltas, monte_carlo_scan

ext = extremize_deltas(2001)
print("grid maximum of F - U:", ext["max_delta1"], "at (m, n) =", ext["argmax_delta1"])
print("surface at that point:", delta_surface(0.625, 0.8))

for constraint in ("j_zero", "bell_init"):
    samples = monte_carlo_scan(ScanConfig(5000, seed=0, constraint=constraint))
    d1 = np.array([s.delta1 for s in samples])
    d2 = np.array([s.delta2 for s in samples])
    print(f"{constraint:10s} F-U in [{d1.min():+.2e}, {d1.max():.4f}]  "
          f"2U-F in [{d2.min():+.4f}, {d2.max():.4f}]  F > 2U on {np.sum(d2 < -1e-12)} samples")

"""
Certified erf
=============

Interval masses of Gaussians reduce to erf. The kernel takes an additive
error budget and is checked here against a 30-digit multiprecision series.
"""

import numpy as np

from gausstv import erf_approx, gaussian_interval_mass
from gausstv.oracle import erf_reference

xs = np.arange(0, 201) * 0.1
ref = np.array([erf_reference(x) for x in xs])
for eps in (1e-3, 1e-6, 1e-9, 1e-12):
    err = np.abs(erf_approx(xs, eps) - ref).max()
    print(f"eps={eps:.0e}: max |error| on [0, 20] = {err:.2e}")

print("\nP(-1 <= Z <= 1) =", gaussian_interval_mass(0.0, 1.0, -1.0, 1.0, 1e-12))
print("P(X >= 3), X ~ N(1, 4) =", gaussian_interval_mass(1.0, 4.0, 3.0, np.inf, 1e-12))

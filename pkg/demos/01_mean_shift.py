"""
Relative error on a closed-form case
====================================

Two unit-variance Gaussians whose means differ by ``mu`` have total
variation distance ``erf(|mu| / (2 sqrt 2))``. That gives an exact target
to compare the solver against at several accuracy levels.
"""

import math
import time

from gausstv import GaussianParams, mult_gaussian_tv

for mu in (0.1, 1.0, 2.0):
    exact = math.erf(mu / (2 * math.sqrt(2)))
    for eps in (0.1, 0.01):
        t0 = time.perf_counter()
        res = mult_gaussian_tv(GaussianParams([mu], [[1.0]]), GaussianParams([0.0], [[1.0]]), eps)
        secs = time.perf_counter() - t0
        rel = abs(res.estimate - exact) / exact
        print(f"mu={mu:<4} eps={eps:<5} estimate={res.estimate:.10f} exact={exact:.10f} "
              f"rel.err={rel:.1e} ({secs * 1e3:.0f} ms)")

# The diagnostics show the discretization that produced the last estimate:
# the lower bound Delta on the distance, the partition parameters and the
# number of cells each coordinate was discretized into.
d = res.diagnostics
print(f"\nDelta={d.delta}  gamma={d.gamma:.3g}  delta={d.small_delta:.3g}  cells={d.alphabet_size}")

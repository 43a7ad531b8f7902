"""
Degenerate covariances
======================

Singular covariances are resolved before any numerics: different ranks, or
supports that do not coincide, mean the distributions are mutually singular
(distance 1). Pairs living on the same affine subspace are projected onto it
and solved there.
"""

import numpy as np

from gausstv import GaussianParams, mult_gaussian_tv, resolve_rank_case
from gausstv.oracle import quadrature_tv_1d

cases = {
    "rank mismatch": (GaussianParams([0, 0], np.eye(2)), GaussianParams([0, 0], np.diag([1.0, 0.0]))),
    "identical": (GaussianParams([1, 2], np.eye(2)), GaussianParams([1, 2], np.eye(2))),
    "shifted support": (GaussianParams([0, 0], np.diag([1.0, 0.0])), GaussianParams([0, 1], np.diag([1.0, 0.0]))),
}
for name, (a, b) in cases.items():
    print(f"{name:<16} -> {mult_gaussian_tv(a, b, 0.1).estimate}")

# Both laws live on the line through (1, 1) in direction (3, 4)/5.
u = np.array([3.0, 4.0]) / 5
a = GaussianParams([1.0, 1.0], 2.0 * np.outer(u, u))
b = GaussianParams(np.array([1.0, 1.0]) + 0.7 * u, 0.5 * np.outer(u, u))
rc = resolve_rank_case(a, b)
print(f"\naligned support: {rc.kind}, rank {rc.rank}")
print("projected pair:", rc.pair[0].covariance.ravel(), rc.pair[1].mean, rc.pair[1].covariance.ravel())
res = mult_gaussian_tv(a, b, 0.05)
print(f"estimate {res.estimate:.8f}  1-D quadrature {quadrature_tv_1d((0.0, 2.0), (0.7, 0.5)):.8f}")

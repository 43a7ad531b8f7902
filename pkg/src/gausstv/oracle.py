"""Brute-force references for testing, kept independent of the solver's kernels.

None of these share numeric code with the solver: integration uses SciPy's
QUADPACK wrapper and plain midpoint sums, densities come from direct
formulas or SciPy, and erf comes from a multiprecision power series.
"""

import math
from dataclasses import dataclass

import mpmath
import numpy as np
from scipy import integrate, stats

from .disprod import exact_product_tv
from .errors import DimensionTooLarge, InvalidInput, NumericalFailure
from .gaussian_model import GaussianParams

__all__ = [
    "quadrature_tv_1d",
    "grid_tv_nd",
    "GridEstimate",
    "erf_reference",
    "mc_tv_baseline",
    "exact_product_tv",
]


def _as_mu_var(c):
    if c is None:
        return 0.0, 1.0
    if hasattr(c, "sigma2"):
        return float(c.mu), float(c.sigma2)
    if isinstance(c, GaussianParams):
        if c.dim != 1:
            raise DimensionTooLarge("quadrature_tv_1d needs 1-D inputs", stage="oracle")
        return float(c.mean[0]), float(c.covariance[0, 0])
    mu, var = c
    return float(mu), float(var)


def _crossings(m1, v1, m2, v2):
    """Real solutions of log N(x; m1, v1) = log N(x; m2, v2)."""
    # (x-m1)^2/v1 - (x-m2)^2/v2 + ln(v1/v2) = 0
    a = 1.0 / v1 - 1.0 / v2
    b = -2.0 * (m1 / v1 - m2 / v2)
    c = m1 * m1 / v1 - m2 * m2 / v2 + math.log(v1 / v2)
    if a == 0.0:
        return [] if b == 0.0 else [-c / b]
    roots = np.roots([a, b, c])
    return sorted(float(r.real) for r in roots if abs(r.imag) <= 1e-12 * max(1.0, abs(r.real)))


def quadrature_tv_1d(c1, c2=None, tol=1e-10):
    """``(1/2) int |f - g|`` for two 1-D Gaussians by adaptive quadrature.

    Parameters
    ----------
    c1, c2 : CoordinateParams, GaussianParams or (mu, variance)
        ``c2`` defaults to the standard normal.
    tol : float
        Absolute accuracy target, at least 1e-12.

    The integration range is the union of ``mu +- 12 sigma`` for both laws and
    is split at the density crossings so each piece has a fixed sign.
    """
    if tol < 1e-12:
        raise InvalidInput("tol must be at least 1e-12", stage="oracle")
    m1, v1 = _as_mu_var(c1)
    m2, v2 = _as_mu_var(c2)
    if v1 <= 0 or v2 <= 0:
        raise InvalidInput("variances must be positive", stage="oracle")
    if m1 == m2 and v1 == v2:
        return 0.0
    s1, s2 = math.sqrt(v1), math.sqrt(v2)
    lo = min(m1 - 12 * s1, m2 - 12 * s2)
    hi = max(m1 + 12 * s1, m2 + 12 * s2)
    cuts = [lo] + [x for x in _crossings(m1, v1, m2, v2) if lo < x < hi] + [hi]

    def diff(x):
        f = math.exp(-0.5 * (x - m1) ** 2 / v1) / math.sqrt(2 * math.pi * v1)
        g = math.exp(-0.5 * (x - m2) ** 2 / v2) / math.sqrt(2 * math.pi * v2)
        return f - g

    total, err_total = 0.0, 0.0
    pieces = len(cuts) - 1
    for a, b in zip(cuts[:-1], cuts[1:]):
        # refine each piece further around the bulk of both laws
        pts = [p for p in (m1, m2) if a < p < b]
        val, err = integrate.quad(diff, a, b, points=pts or None, epsabs=tol / (4 * pieces), epsrel=0.0, limit=500)
        total += abs(val)
        err_total += err
    if err_total > tol:
        raise NumericalFailure(f"quadrature error estimate {err_total:.2e} exceeds {tol:.0e}", stage="oracle")
    return min(1.0, 0.5 * total)


@dataclass(frozen=True)
class GridEstimate:
    value: float
    error: float  # Richardson estimate |T(2N) - T(N)| / 3
    cells_per_axis: int


def _midpoint_tv(p1, p2, lo, hi, cells, chunk=1 << 20):
    d = lo.size
    step = (hi - lo) / cells
    axes = [lo[i] + (np.arange(cells) + 0.5) * step[i] for i in range(d)]
    r1 = stats.multivariate_normal(p1.mean, p1.covariance)
    r2 = stats.multivariate_normal(p2.mean, p2.covariance)
    total = cells**d
    acc = 0.0
    # enumerate the grid in flat chunks to bound memory
    for start in range(0, total, chunk):
        flat = np.arange(start, min(total, start + chunk))
        idx = np.unravel_index(flat, (cells,) * d)
        pts = np.stack([axes[i][idx[i]] for i in range(d)], axis=1)
        acc += float(np.sum(np.abs(r1.pdf(pts) - r2.pdf(pts))))
    return 0.5 * acc * float(np.prod(step))


def grid_tv_nd(p1, p2, cells_per_axis=64, extent_sigmas=8.0):
    """Midpoint-rule TV over a box covering both Gaussians, dimension at most 3.

    Returns a :class:`GridEstimate` with the value at ``2 * cells_per_axis``
    and a Richardson error estimate against ``cells_per_axis``.
    """
    if p1.dim != p2.dim:
        raise InvalidInput("dimension mismatch", stage="oracle")
    if p1.dim > 3:
        raise DimensionTooLarge(f"grid oracle supports dimension <= 3, got {p1.dim}", stage="oracle")
    if np.array_equal(p1.mean, p2.mean) and np.array_equal(p1.covariance, p2.covariance):
        return GridEstimate(0.0, 0.0, 2 * cells_per_axis)
    sd1 = np.sqrt(np.diag(p1.covariance))
    sd2 = np.sqrt(np.diag(p2.covariance))
    lo = np.minimum(p1.mean - extent_sigmas * sd1, p2.mean - extent_sigmas * sd2)
    hi = np.maximum(p1.mean + extent_sigmas * sd1, p2.mean + extent_sigmas * sd2)
    coarse = _midpoint_tv(p1, p2, lo, hi, cells_per_axis)
    fine = _midpoint_tv(p1, p2, lo, hi, 2 * cells_per_axis)
    return GridEstimate(min(1.0, fine), abs(fine - coarse) / 3.0, 2 * cells_per_axis)


def erf_reference(x, digits=30):
    """erf(x) to ``digits`` significant digits from the Maclaurin series in multiprecision.

    Uses the ``10 ceil(ln(1/eps))^2`` term budget with ``eps = 10^-digits``
    (stopping early once the remaining terms are negligible) and returns
    1 beyond ``ln(1/eps)``. Requires ``|x| <= 30``.
    """
    x = float(x)
    if abs(x) > 30:
        raise InvalidInput("erf_reference supports |x| <= 30", stage="oracle")
    if x < 0:
        return -erf_reference(-x, digits)
    if x == 0:
        return 0.0
    ln_inv = digits * math.log(10)
    if x > ln_inv:
        return 1.0
    n_terms = 10 * math.ceil(ln_inv) ** 2
    # terms peak near exp(x^2) before cancelling
    dps = digits + 10 + int(x * x / math.log(10))
    with mpmath.workdps(dps):
        xm = mpmath.mpf(x)
        x2 = xm * xm
        term = xm
        total = xm
        tiny = mpmath.mpf(10) ** (-(digits + 5))
        for k in range(n_terms):
            term = -term * x2 * (2 * k + 1) / ((k + 1) * (2 * k + 3))
            total += term
            if k > math.e * x * x and abs(term) < tiny:
                break
        return float(2 / mpmath.sqrt(mpmath.pi) * total)


def mc_tv_baseline(p1, p2, samples=100_000, seed=0):
    """Naive Monte Carlo ``E_Q[(1 - f/g)_+]`` with ``Q = p2``; additive error only.

    Returns
    -------
    (estimate, stderr)
    """
    if not isinstance(p1, GaussianParams):
        p1 = GaussianParams(*p1)
    if not isinstance(p2, GaussianParams):
        p2 = GaussianParams(*p2)
    rng = np.random.default_rng(seed)
    x = rng.multivariate_normal(p2.mean, p2.covariance, size=int(samples), method="cholesky")
    lf = stats.multivariate_normal(p1.mean, p1.covariance).logpdf(x)
    lg = stats.multivariate_normal(p2.mean, p2.covariance).logpdf(x)
    vals = np.maximum(0.0, 1.0 - np.exp(np.minimum(lf - lg, 700.0)))
    return float(vals.mean()), float(vals.std(ddof=1) / math.sqrt(vals.size))

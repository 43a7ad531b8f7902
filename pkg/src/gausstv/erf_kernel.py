"""Additive-error evaluation of erf and of Gaussian interval masses.

Two certified evaluators produce erfc at the nodes of a fixed table:

* ``x <= SERIES_CUTOFF``: the alternating Maclaurin series, summed with the
  term recurrence until the first omitted term is below budget (for an
  alternating series with decreasing terms that term bounds the remainder).
* larger ``x``: the Laplace continued fraction for erfc. Its convergents
  bracket the limit, so the gap between two consecutive convergents bounds
  the truncation error.

Queries are answered by an order-5 Taylor expansion about the nearest node
(derivatives of erfc are Hermite polynomials times a Gaussian), whose
remainder is bounded a priori. Past the tail cut erf is returned as 1: the
cut is ``ln(1/eps)`` or the point where ``exp(-x^2)/(x sqrt(pi)) <= eps/2``,
whichever is smaller.

The Maclaurin series is not used for large ``x`` in floating point: its terms
grow like ``exp(x^2)`` before cancelling. :func:`erf_series` evaluates the
plain series with ``10*ceil(ln(1/eps))^2`` terms in multiprecision arithmetic
for cross-checking.
"""

import math

import mpmath
import numpy as np

from .errors import BudgetTooTight, InvalidInterval, NegativeValue, NonpositiveVariance, OutOfRange

__all__ = [
    "ERF_EPS_FLOOR",
    "inv_pi_scaled_constant",
    "erf_approx",
    "erf_series",
    "gaussian_interval_mass",
]

# 2/sqrt(pi) to 40 significant digits.
TWO_OVER_SQRT_PI = "1.128379167095512573896158903121545171688"
_TWO_OVER_SQRT_PI = float(TWO_OVER_SQRT_PI)
_INV_SQRT_PI = 0.5 * _TWO_OVER_SQRT_PI

# Below this budget double precision cannot certify an additive bound on erf.
ERF_EPS_FLOOR = 1e-15
SERIES_CUTOFF = 1.0
_EPS_CAP = 1e-4


def inv_pi_scaled_constant():
    """Return 2/sqrt(pi) in working precision."""
    return _TWO_OVER_SQRT_PI


def _check_eps(eps):
    eps = float(eps)
    if not (0.0 < eps <= 0.5):
        raise OutOfRange(f"eps must lie in (0, 1/2], got {eps!r}", stage="erf")
    if eps < ERF_EPS_FLOOR:
        raise BudgetTooTight(
            f"eps={eps:.3e} is below the double-precision floor {ERF_EPS_FLOOR:.0e}",
            stage="erf",
        )
    return min(eps, _EPS_CAP)


def _tail_cut(eps):
    """Smallest x beyond which returning 1 is within eps (certified)."""
    x = math.log(1.0 / eps)
    lo = 1.0
    # erfc(x) <= exp(-x^2) / (x sqrt(pi)) for x > 0; bisect for the bound eps/2.
    if math.exp(-x * x) / (x * math.sqrt(math.pi)) <= eps / 2:
        hi = x
        for _ in range(60):
            mid = 0.5 * (lo + hi)
            if math.exp(-mid * mid) / (mid * math.sqrt(math.pi)) <= eps / 2:
                hi = mid
            else:
                lo = mid
        x = hi
    return x


def _series(x, tol):
    x2 = x * x
    term = x.copy()
    total = x.copy()
    k = 0
    while True:
        term = term * (-x2) * (2 * k + 1) / ((k + 1) * (2 * k + 3))
        k += 1
        if k > x2.max(initial=0.0) and np.abs(term).max(initial=0.0) * _TWO_OVER_SQRT_PI < tol:
            break
        total += term
    return total * _TWO_OVER_SQRT_PI


def _cf_erfc(x, tol):
    """erfc via backward evaluation of the Laplace continued fraction."""
    out = np.empty_like(x)
    todo = np.arange(x.size)
    depth = 24
    while todo.size:
        xs = x[todo]
        t = np.zeros_like(xs)
        for k in range(depth + 1, 1, -1):
            t = (0.5 * k) / (xs + t)
        deeper = 1.0 / (xs + 0.5 / (xs + t))
        t = np.zeros_like(xs)
        for k in range(depth, 0, -1):
            t = (0.5 * k) / (xs + t)
        shallow = 1.0 / (xs + t)
        scale = np.exp(-xs * xs) * _INV_SQRT_PI
        gap = scale * np.abs(deeper - shallow)
        ok = gap <= tol
        out[todo[ok]] = scale[ok] * 0.5 * (deeper[ok] + shallow[ok])
        todo = todo[~ok]
        depth *= 2
        if depth > 1 << 16:
            raise BudgetTooTight("continued fraction failed to converge", stage="erf")
    return out


# Evaluation table: erfc at nodes j/_NODES_PER_UNIT, expanded to order
# _TAYLOR_ORDER. With |d| <= 1/512 the Lagrange remainder, bounded through
# |H_n(x)| exp(-x^2/2) <= 1.0865 * 2^(n/2) * sqrt(n!), is below 1e-17.
_NODES_PER_UNIT = 256
_TABLE_END = 6.5
_TAYLOR_ORDER = 5
_table = None


def _taylor_remainder_bound():
    k = _TAYLOR_ORDER
    half_step = 0.5 / _NODES_PER_UNIT
    hermite_bound = 1.0865 * 2.0 ** (k / 2) * math.sqrt(math.factorial(k))
    return _TWO_OVER_SQRT_PI * hermite_bound * half_step ** (k + 1) / math.factorial(k + 1)


def _build_table():
    nodes = np.arange(0, int(_TABLE_END * _NODES_PER_UNIT) + 2) / _NODES_PER_UNIT
    tol = 1e-18
    erfc0 = np.empty_like(nodes)
    small = nodes <= SERIES_CUTOFF
    erfc0[small] = 1.0 - _series(nodes[small], tol)
    erfc0[~small] = _cf_erfc(nodes[~small], tol)
    # coef[k] multiplies d**k in erfc(x0 + d); erfc^(k)(x) = (2/sqrt(pi)) (-1)^k H_{k-1}(x) e^{-x^2}
    coef = np.empty((_TAYLOR_ORDER + 1, nodes.size))
    coef[0] = erfc0
    weight = _TWO_OVER_SQRT_PI * np.exp(-nodes * nodes)
    h_prev = np.zeros_like(nodes)
    h_cur = np.ones_like(nodes)
    for k in range(1, _TAYLOR_ORDER + 1):
        coef[k] = (-1) ** k * weight * h_cur / math.factorial(k)
        h_prev, h_cur = h_cur, 2 * nodes * h_cur - 2 * (k - 1) * h_prev
    return coef


def _erfc_table(x):
    global _table
    if _table is None:
        _table = _build_table()
    j = np.rint(x * _NODES_PER_UNIT).astype(np.intp)
    d = x - j / _NODES_PER_UNIT
    acc = _table[_TAYLOR_ORDER].take(j)
    for k in range(_TAYLOR_ORDER - 1, -1, -1):
        acc *= d
        acc += _table[k].take(j)
    return acc


def _erf_nonneg(x, eps):
    """erf on a nonnegative float array; eps already validated and capped."""
    cut = min(_tail_cut(eps), _TABLE_END)
    val = 1.0 - _erfc_table(np.minimum(x, cut))
    val[x > cut] = 1.0
    return np.clip(val, 0.0, 1.0, out=val)


def _erf_direct(x, eps):
    """Same contract as ``_erf_nonneg`` but without the table (used to build it)."""
    out = np.ones_like(x)
    cut = _tail_cut(eps)
    small = x <= SERIES_CUTOFF
    if small.any():
        out[small] = _series(x[small], eps / 4)
    mid = (~small) & (x <= cut)
    if mid.any():
        out[mid] = 1.0 - _cf_erfc(x[mid], eps / 4)
    return np.clip(out, 0.0, 1.0)


def erf_approx(x, eps):
    """Approximate erf(x) for x >= 0 with additive error at most ``eps``.

    Parameters
    ----------
    x : float or array_like
        Nonnegative argument(s); ``+inf`` is allowed.
    eps : float
        Additive error budget in (0, 1/2]. Budgets below ``ERF_EPS_FLOOR``
        raise :class:`BudgetTooTight`.

    Returns
    -------
    float or ndarray
        Values in [0, 1].
    """
    eps_eff = _check_eps(eps)
    arr = np.asarray(x, dtype=float)
    if np.isnan(arr).any():
        raise OutOfRange("erf argument is NaN", stage="erf")
    if (arr < 0).any():
        raise NegativeValue("erf_approx expects x >= 0; use oddness for negatives", stage="erf")
    flat = arr.reshape(-1)
    res = _erf_nonneg(flat, eps_eff).reshape(arr.shape)
    if res.ndim == 0:
        return float(res)
    return res


def _erf_signed(x, eps_eff):
    flat = np.asarray(x, dtype=float).reshape(-1)
    return np.copysign(_erf_nonneg(np.abs(flat), eps_eff), flat)


def erf_series(x, eps, dps=None):
    """Verbatim truncated Maclaurin series in multiprecision arithmetic.

    Uses ``N = 10*ceil(ln(1/eps))^2`` terms after capping eps at 1e-4, and
    returns exactly 1 when ``x > ln(1/eps)``. Intended for validation only:
    it is slow and returns an ``mpmath.mpf``.
    """
    eps = min(float(eps), _EPS_CAP)
    x = mpmath.mpf(x)
    if x < 0:
        return -erf_series(-x, eps, dps)
    ln_inv = math.log(1.0 / eps)
    if x > ln_inv:
        return mpmath.mpf(1)
    n_terms = 10 * math.ceil(ln_inv) ** 2
    if dps is None:
        # terms peak near exp(x^2); carry enough digits to absorb the cancellation
        dps = int(float(x) ** 2 / math.log(10)) + int(math.log10(1.0 / eps)) + 20
    with mpmath.workdps(dps):
        x = mpmath.mpf(x)
        x2 = x * x
        term = x
        total = x
        for k in range(n_terms):
            term = -term * x2 * (2 * k + 1) / ((k + 1) * (2 * k + 3))
            total += term
        result = mpmath.mpf(TWO_OVER_SQRT_PI) * total
        if result < 0:
            result = mpmath.mpf(0)
    return +result


def gaussian_interval_mass(mu, sigma2, a, b, eps):
    """Mass of N(mu, sigma2) on [a, b] with additive error at most ``eps``.

    ``a`` and ``b`` may be arrays (broadcast together) and may be infinite.
    Each erf evaluation gets budget eps/2.
    """
    sigma2 = float(sigma2)
    if not sigma2 > 0 or not math.isfinite(sigma2):
        raise NonpositiveVariance(f"variance must be positive and finite, got {sigma2!r}", stage="erf")
    eps = float(eps)
    if not (0.0 < eps <= 0.5):
        raise OutOfRange(f"eps must lie in (0, 1/2], got {eps!r}", stage="erf")
    eps_eff = _check_eps(eps / 2)
    a_arr, b_arr = np.broadcast_arrays(np.asarray(a, dtype=float), np.asarray(b, dtype=float))
    if (a_arr > b_arr).any():
        raise InvalidInterval("interval has a > b", stage="erf")
    scale = math.sqrt(2.0 * sigma2)
    za = (a_arr - mu) / scale
    zb = (b_arr - mu) / scale
    ea = _erf_signed(za, eps_eff).reshape(za.shape)
    eb = _erf_signed(zb, eps_eff).reshape(zb.shape)
    # ab <= 0: (erf|a| + erf|b|)/2; same sign: (erf|b| - erf|a|)/2 up to the
    # orientation. Both collapse to (erf(b) - erf(a))/2 with the odd extension.
    mass = 0.5 * (eb - ea)
    mass = np.maximum(mass, 0.0)
    if mass.ndim == 0:
        return float(mass)
    return mass

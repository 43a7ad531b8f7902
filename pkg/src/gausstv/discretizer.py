"""Per-coordinate discretization of a 1-D Gaussian likelihood ratio.

For ``f = N(mu, sigma2)`` against ``g = N(0, 1)``,

    ln(f/g)(z) = A z^2 + B z + C,
    A = (1 - 1/sigma2)/2,  B = mu/sigma2,  C = -mu^2/(2 sigma2) - ln(sigma2)/2.

The sublevel set ``S(t) = {z : ln(f/g)(z) <= t}`` is an interval (A > 0 or the
linear case) or the complement of one (A < 0). The preimage of a partition
cell ``(lo, hi]`` is ``S(ln hi) minus S(ln lo)``, so cell masses are differences
of sublevel-set masses evaluated once per partition breakpoint.
"""

import math
from dataclasses import dataclass

import numpy as np

from .erf_kernel import gaussian_interval_mass
from .errors import InvalidInput, NonpositiveVariance, NotADistribution, ZeroDelta
from .ratio import PROB_TOL, accurate_sum, build_partition

_MERGE_TOL = 1.5e-8


@dataclass(frozen=True)
class CoordinateParams:
    mu: float
    sigma2: float

    def __post_init__(self):
        mu, s2 = float(self.mu), float(self.sigma2)
        if not (math.isfinite(s2) and s2 > 0):
            raise NonpositiveVariance(f"sigma2 must be finite and positive, got {s2!r}", stage="discretize")
        if not math.isfinite(mu):
            raise InvalidInput(f"mu must be finite, got {mu!r}", stage="discretize")
        object.__setattr__(self, "mu", mu)
        object.__setattr__(self, "sigma2", s2)

    @property
    def is_standard(self):
        return self.mu == 0.0 and self.sigma2 == 1.0

    def coefficients(self):
        s2 = self.sigma2
        a = 0.5 * (1.0 - 1.0 / s2)
        b = self.mu / s2
        c = -self.mu**2 / (2.0 * s2) - 0.5 * math.log(s2)
        return a, b, c


@dataclass(frozen=True)
class DiscretePair:
    """Distributions over canonical cell indices ``0..2m``."""

    p_tilde: np.ndarray
    q_tilde: np.ndarray

    def __post_init__(self):
        for name in ("p_tilde", "q_tilde"):
            x = np.asarray(getattr(self, name), dtype=float)
            if x.ndim != 1 or (x < 0).any() or abs(accurate_sum(x) - 1.0) > PROB_TOL:
                raise NotADistribution(f"{name} is not a probability vector", stage="discretize")
            object.__setattr__(self, name, x)
        if self.p_tilde.shape != self.q_tilde.shape:
            raise NotADistribution("p_tilde and q_tilde differ in length", stage="discretize")

    @property
    def size(self):
        return self.p_tilde.size


@dataclass(frozen=True)
class LevelSet:
    """Up to two disjoint sorted intervals ``(left, right)``, endpoints may be infinite."""

    intervals: tuple = ()

    def contains(self, z):
        return any(lo < z < hi for lo, hi in self.intervals)

    def mass(self, mu, sigma2, eps=1e-12):
        return sum(gaussian_interval_mass(mu, sigma2, lo, hi, eps) for lo, hi in self.intervals)


@dataclass(frozen=True)
class BuildReport:
    delta: float
    gamma: float
    small_delta: float
    m: int
    alphabet_size: int
    zeta: float
    max_mass_gap: float  # largest |sum - 1| before renormalization
    endpoint_error: float  # monitored endpoint error times sqrt(2/(pi min(1, sigma2)))


def coordinate_delta(mu, sigma2):
    return min(1.0, max(abs(sigma2 - 1.0), 40.0 * abs(mu))) / 200.0


def delta_bound(coords):
    """``max_i (1/200) min{1, max{|sigma2_i - 1|, 40 |mu_i|}}``."""
    coords = list(coords)
    if not coords:
        raise InvalidInput("at least one coordinate is required", stage="discretize")
    return max(coordinate_delta(c.mu, c.sigma2) for c in coords)


def _sublevel(coord, t):
    """Sublevel sets ``S(t)`` for an array of log-thresholds.

    Returns ``(left, right, complement)``: ``S = [left, right]`` or, where
    ``complement`` is set, ``S = R minus (left, right)``. Empty sets are
    ``[0, 0]``.
    """
    t = np.asarray(t, dtype=float)
    a, b, c0 = coord.coefficients()
    left = np.zeros(t.shape)
    right = np.zeros(t.shape)
    comp = np.zeros(t.shape, dtype=bool)
    full = t == np.inf
    left[full], right[full] = -np.inf, np.inf
    live = np.isfinite(t)
    c = c0 - t[live]
    if a == 0.0:
        lo = np.full(c.shape, -np.inf)
        hi = np.full(c.shape, np.inf)
        if b > 0:
            hi = -c / b
        elif b < 0:
            lo = -c / b
        else:
            lo = np.where(c <= 0, -np.inf, 0.0)
            hi = np.where(c <= 0, np.inf, 0.0)
        left[live], right[live] = lo, hi
        return left, right, comp

    disc = b * b - 4.0 * a * c
    pos = disc > 0
    root = np.sqrt(np.where(pos, disc, 0.0))
    # stable pair of roots: q = -(b + sign(b) sqrt(disc)) / 2, roots q/a and c/q
    sgn = 1.0 if b >= 0 else -1.0
    q = -0.5 * (b + sgn * root)
    with np.errstate(divide="ignore", invalid="ignore"):
        r1 = q / a
        r2 = np.where(q != 0, c / np.where(q != 0, q, 1.0), -r1)
    lo = np.where(pos, np.minimum(r1, r2), 0.0)
    hi = np.where(pos, np.maximum(r1, r2), 0.0)
    if a > 0:
        left[live], right[live] = lo, hi
    else:
        # concave: S is everything outside (lo, hi), or all of R without real roots
        lo = np.where(pos, lo, 0.0)
        hi = np.where(pos, hi, 0.0)
        left[live], right[live] = lo, hi
        comp[live] = True
    return left, right, comp


def _as_intervals(left, right, comp):
    if comp:
        if left >= right:
            return [(-math.inf, math.inf)]
        return [(-math.inf, left), (right, math.inf)]
    if left >= right:
        return []
    return [(left, right)]


def _subtract(outer, inner):
    """``outer minus inner`` for finite unions of intervals (inner contained in outer)."""
    out = []
    for lo, hi in outer:
        pieces = [(lo, hi)]
        for ilo, ihi in inner:
            nxt = []
            for plo, phi in pieces:
                if ihi <= plo or ilo >= phi:
                    nxt.append((plo, phi))
                    continue
                if ilo > plo:
                    nxt.append((plo, ilo))
                if ihi < phi:
                    nxt.append((ihi, phi))
            pieces = nxt
        out.extend(pieces)
    return out


def _normalize(intervals):
    """Sort, drop empty pieces and merge pieces separated by a rounding-size gap."""
    pieces = sorted((float(lo) + 0.0, float(hi) + 0.0) for lo, hi in intervals if hi > lo)
    merged = []
    for lo, hi in pieces:
        if merged and lo - merged[-1][1] <= _MERGE_TOL * max(1.0, abs(lo)):
            merged[-1] = (merged[-1][0], max(merged[-1][1], hi))
        else:
            merged.append((lo, hi))
    # a piece shorter than the merge tolerance is a double root, not a set
    merged = [(lo, hi) for lo, hi in merged if hi - lo > _MERGE_TOL * max(1.0, abs(lo)) or math.isinf(hi - lo)]
    return tuple(merged)


def solve_level_set(coord, lo, hi):
    """``{z : lo < f(z)/g(z) <= hi}`` as at most two disjoint intervals.

    Examples
    --------
    >>> solve_level_set(CoordinateParams(1.0, 1.0), math.exp(-0.5), math.exp(0.5)).intervals
    ((0.0, 1.0),)
    """
    lo, hi = float(lo), float(hi)
    if lo < 0 or hi < lo:
        raise InvalidInput(f"need 0 <= lo <= hi, got ({lo!r}, {hi!r})", stage="level_set")
    with np.errstate(divide="ignore"):
        t = np.log(np.array([lo, hi]))
    left, right, comp = _sublevel(coord, t)
    inner = _as_intervals(left[0], right[0], comp[0]) if lo > 0 else []
    outer = _as_intervals(left[1], right[1], comp[1])
    return LevelSet(_normalize(_subtract(outer, inner)))


def _sublevel_mass(mu, sigma2, left, right, comp, eps):
    m = gaussian_interval_mass(mu, sigma2, left, right, eps)
    return np.where(comp, 1.0 - m, m)


def _thresholds(spec):
    """Sorted cell boundaries ``0 = a_m < ... < a_1 < 1 < 1/a_1 < ... < inf``."""
    a = spec.breakpoints
    with np.errstate(divide="ignore"):
        return np.concatenate([a[::-1], 1.0 / a[1:]])


def _renormalize(x):
    """Make ``x`` sum to 1: deficit goes to I(0), surplus is removed proportionally."""
    x = np.maximum(x, 0.0)
    total = accurate_sum(x)
    if total < 1.0:
        x[0] += 1.0 - total
    elif total > 1.0:
        x *= 1.0 / total
    for _ in range(4):
        resid = 1.0 - accurate_sum(x)
        if resid == 0.0:
            break
        j = int(np.argmax(x))
        x[j] = max(0.0, x[j] + resid)
    return x


def _coordinate_masses(coord, spec, zeta):
    """Raw (unrenormalized) cell masses of f and g, canonical order."""
    m = spec.m
    thr = _thresholds(spec)
    with np.errstate(divide="ignore"):
        t = np.log(thr)
    left, right, comp = _sublevel(coord, t)
    eps = min(zeta / 2.0, 0.5)
    f_mass = _sublevel_mass(coord.mu, coord.sigma2, left, right, comp, eps)
    g_mass = _sublevel_mass(0.0, 1.0, left, right, comp, eps)
    f_mass[0] = g_mass[0] = 0.0  # S(ln 0) is empty
    f_mass[-1] = g_mass[-1] = 1.0  # S(inf) is everything
    # sorted cell j spans (thr[j], thr[j+1]); the point {1} carries no mass
    df = np.maximum(np.diff(f_mass), 0.0)
    dg = np.maximum(np.diff(g_mass), 0.0)
    p = np.zeros(2 * m + 1)
    q = np.zeros(2 * m + 1)
    p[m:0:-1], q[m:0:-1] = df[:m], dg[:m]  # I(m) .. I(1)
    p[m + 1 :], q[m + 1 :] = df[m:], dg[m:]  # J(1) .. J(m)
    finite = np.concatenate([left[np.isfinite(left)], right[np.isfinite(right)]])
    reach = float(np.max(np.abs(finite))) if finite.size else 0.0
    return p, q, reach


def discretize_coordinate(coord, spec, zeta):
    """Approximate cell masses ``(p_tilde, q_tilde)`` of f and g.

    Each cell mass is within ``zeta`` before renormalization; returns a
    :class:`DiscretePair` and also reports the pre-renormalization mass gap
    via :func:`discretize_coordinate_report`.
    """
    return discretize_coordinate_report(coord, spec, zeta)[0]


def discretize_coordinate_report(coord, spec, zeta):
    """As :func:`discretize_coordinate`, returning ``(pair, mass_gap, endpoint_error)``."""
    if not zeta > 0:
        raise InvalidInput(f"zeta must be positive, got {zeta!r}", stage="discretize")
    size = spec.size
    if coord.is_standard:
        ind = np.zeros(size)
        ind[0] = 1.0
        return DiscretePair(ind, ind.copy()), 0.0, 0.0
    p, q, reach = _coordinate_masses(coord, spec, zeta)
    gap = max(abs(accurate_sum(p) - 1.0), abs(accurate_sum(q) - 1.0))
    # roots from hardware log/sqrt carry a few ulps of relative error
    end_err = 8 * np.finfo(float).eps * max(1.0, reach)
    end_err *= math.sqrt(2.0 / (math.pi * min(1.0, coord.sigma2)))
    return DiscretePair(_renormalize(p), _renormalize(q)), gap, end_err


def build_constants(n, eps, delta):
    """``gamma = eps*delta/(50n)``, ``delta_small = eps/(50n)``."""
    return eps * delta / (50.0 * n), eps / (50.0 * n)


def build_discrete_products(pair, eps):
    """Discretize every coordinate of a whitened product pair.

    Parameters
    ----------
    pair : ProductGaussianPair
    eps : float
        Relative budget; the discrete product TV is within ``(eps/3) D`` of
        the Gaussian TV ``D``.

    Returns
    -------
    list of DiscretePair, BuildReport
    """
    eps = float(eps)
    if not 0.0 < eps < 1.0:
        raise InvalidInput(f"eps must lie in (0, 1), got {eps!r}", stage="discretize")
    coords = [CoordinateParams(mu, s2) for mu, s2 in zip(pair.mu, pair.sigma2)]
    n = len(coords)
    delta = delta_bound(coords)
    if delta == 0.0:
        raise ZeroDelta("all coordinates are standard", stage="discretize")
    gamma, small_delta = build_constants(n, eps, delta)
    spec = build_partition(gamma, small_delta)
    size = spec.size
    zeta = eps * delta / (500.0 * size * n)
    pairs, gaps, ends = [], [], []
    for c in coords:
        dp, gap, end = discretize_coordinate_report(c, spec, zeta)
        pairs.append(dp)
        gaps.append(gap)
        ends.append(end)
    report = BuildReport(delta, gamma, small_delta, spec.m, size, zeta, max(gaps), max(ends))
    return pairs, report

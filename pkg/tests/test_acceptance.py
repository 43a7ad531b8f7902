"""Acceptance suite: one test group per criterion, summarized after the run.

Run with ``pytest tests/test_acceptance.py`` or ``python tests/test_acceptance.py``;
a PASS/FAIL line per criterion is printed at the end.
"""

import math
import time

import numpy as np
import pytest
from conftest import random_discrete_pair, random_gaussian, random_ratio, random_spec

from gausstv.discretizer import CoordinateParams, coordinate_delta
from gausstv.disprod import disprod_tv_det, exact_product_tv
from gausstv.erf_kernel import erf_approx
from gausstv.gaussian_model import GaussianParams
from gausstv.oracle import erf_reference, grid_tv_nd, mc_tv_baseline, quadrature_tv_1d
from gausstv.pipeline import formula_alphabet_size, mult_gaussian_tv
from gausstv.ratio import (
    AtomicRatio,
    discretize,
    discretized_values,
    independent_product,
    scale,
    tv_functional,
)

# TV of N(mu, 1) vs N(0, 1) is erf(|mu| / (2 sqrt 2)); 30-digit values, frozen
MEAN_SHIFT_TV = {
    0.1: 0.0398776116767449232,
    1.0: 0.382924922548026207,
    2.0: 0.682689492137085897,
    1e-4: 3.98942280235206728e-5,
}
# TV of N(0, s2) vs N(0, 1) from the crossing points, frozen
VARIANCE_TV = {0.5: 0.166064074983512901, 1.2: 0.0440859549527458136, 4.0: 0.322674568834768665}


def G(mean, cov):
    return GaussianParams(mean, cov)


def timed(fn, *args, **kwargs):
    t0 = time.perf_counter()
    out = fn(*args, **kwargs)
    return out, time.perf_counter() - t0


# --------------------------------------------------------------------------- 1
@pytest.mark.criterion(1, "1-D mean shift within eps*D, < 1 s")
@pytest.mark.parametrize("eps", [0.1, 0.05, 0.01])
@pytest.mark.parametrize("mu", [0.1, 1.0, 2.0])
def test_c1_mean_shift(mu, eps):
    d = MEAN_SHIFT_TV[mu]
    assert d == pytest.approx(math.erf(mu / (2 * math.sqrt(2))), rel=1e-14)
    res, secs = timed(mult_gaussian_tv, G([mu], [[1.0]]), G([0.0], [[1.0]]), eps)
    print(f"c1 mu={mu} eps={eps}: z={res.estimate:.12g} D={d:.12g} rel={abs(res.estimate - d) / d:.2e} t={secs:.3f}s")
    assert abs(res.estimate - d) <= eps * d
    assert secs < 1.0


# --------------------------------------------------------------------------- 2
@pytest.mark.criterion(2, "1-D variance cases within 5% of quadrature, < 2 s")
@pytest.mark.parametrize("s2", [0.5, 1.2, 4.0])
def test_c2_variance(s2):
    ref = quadrature_tv_1d((0.0, s2), tol=1e-10)
    assert ref == pytest.approx(VARIANCE_TV[s2], abs=1e-10)
    res, secs = timed(mult_gaussian_tv, G([0.0], [[s2]]), G([0.0], [[1.0]]), 0.05)
    print(f"c2 s2={s2}: z={res.estimate:.12g} ref={ref:.12g} t={secs:.3f}s")
    assert abs(res.estimate - ref) <= 0.05 * ref
    assert secs < 2.0


# --------------------------------------------------------------------------- 3
def _low_dim_instances():
    rng = np.random.default_rng(3)
    out = []
    for n in (2, 3):
        while sum(1 for x in out if x[0].dim == n) < 10:
            p1 = random_gaussian(rng, n, shift=0.4)
            p2 = random_gaussian(rng, n, shift=0.4)
            out.append((p1, p2))
    return out


def _grid_reference(p1, p2):
    cells = 64
    limit = 256 if p1.dim == 2 else 128
    while True:
        est = grid_tv_nd(p1, p2, cells_per_axis=cells)
        if est.error < 1e-4 or cells >= limit:
            return est
        cells *= 2


@pytest.mark.criterion(3, "20 random 2-D/3-D pairs within 10% of the grid oracle, < 30 s")
@pytest.mark.parametrize("idx", range(20))
def test_c3_low_dimension(idx):
    p1, p2 = _low_dim_instances()[idx]
    ref = _grid_reference(p1, p2)
    assert ref.error < 1e-4, f"grid oracle did not converge: {ref}"
    if ref.value < 0.01:
        pytest.skip(f"oracle D = {ref.value:.4f} below 0.01")
    res, secs = timed(mult_gaussian_tv, p1, p2, 0.1)
    print(f"c3 n={p1.dim}: z={res.estimate:.8g} ref={ref.value:.8g} (+-{ref.error:.1e}) t={secs:.2f}s")
    assert abs(res.estimate - ref.value) <= 0.1 * ref.value
    assert secs < 30.0


# --------------------------------------------------------------------------- 4
@pytest.mark.criterion(4, "small D = 3.989e-5 within 5%, < 5 s")
def test_c4_small_distance():
    d = MEAN_SHIFT_TV[1e-4]
    res, secs = timed(mult_gaussian_tv, G([1e-4], [[1.0]]), G([0.0], [[1.0]]), 0.05)
    mc, se = mc_tv_baseline(G([1e-4], [[1.0]]), G([0.0], [[1.0]]), samples=1_000_000, seed=0)
    print(f"c4: z={res.estimate:.12g} D={d:.12g} rel={abs(res.estimate - d) / d:.2e} t={secs:.3f}s; "
          f"Monte Carlo 1e6: {mc:.6g} +- {se:.2g} (rel {abs(mc - d) / d:.2e})")
    assert abs(res.estimate - d) <= 0.05 * d
    assert secs < 5.0


# --------------------------------------------------------------------------- 5
def _disprod_instances():
    rng = np.random.default_rng(5)
    for _ in range(100):
        n = int(rng.integers(1, 7))
        pairs = [random_discrete_pair(rng, int(rng.integers(1, 6))) for _ in range(n)]
        yield pairs


@pytest.mark.criterion(5, "discrete product TV within eps of exact on 100 instances")
@pytest.mark.parametrize("eps", [0.3, 0.1, 0.05])
def test_c5_disprod(eps):
    failures, worst = [], 0.0
    for k, pairs in enumerate(_disprod_instances()):
        exact = exact_product_tv(pairs)
        z = disprod_tv_det(pairs, eps)
        if abs(z - exact) > eps * exact:
            failures.append((k, z, exact))
        if exact > 0:
            worst = max(worst, abs(z - exact) / exact)
    print(f"c5 eps={eps}: worst relative error {worst:.2e} ({worst / eps:.3f} of eps)")
    assert not failures


# --------------------------------------------------------------------------- 6
@pytest.mark.criterion(6, "1000 coordinates: Delta <= TV <= min(1e4 Delta, 1) and the closed-form upper bound")
def test_c6_sandwich():
    rng = np.random.default_rng(6)
    bad = []
    for k in range(1000):
        mu = 0.0 if k % 5 == 0 else rng.choice([-1, 1]) * 10 ** rng.uniform(-6, 0.7)
        s2 = 1.0 if k % 5 == 1 else math.exp(rng.choice([-1, 1]) * 10 ** rng.uniform(-6, 0.5))
        if mu == 0.0 and s2 == 1.0:
            s2 = 2.0
        tv = quadrature_tv_1d((mu, s2), tol=1e-10)
        slack = 1e-10
        d1 = coordinate_delta(mu, s2)
        upper = 1.5 * abs(s2 - 1) + abs(mu) / 2
        if not (d1 <= tv + slack and tv <= min(1e4 * d1, 1.0) + slack and tv <= upper + slack):
            bad.append((mu, s2, d1, tv))
    assert not bad, bad[:5]


# --------------------------------------------------------------------------- 7
SEEDS7 = range(500)


def _d2_terms(r, spec):
    rt = discretized_values(r, spec)
    low = r.values < 1
    item1 = float(np.sum(r.probs[low] * np.abs(r.values[low] - rt[low])))
    hi = ~low
    item2 = float(np.sum(r.probs[hi] * np.abs(1 / r.values[hi] - 1 / rt[hi]) * r.values[hi]))
    return item1, item2


@pytest.mark.criterion("7.1", "discretize preserves TV to 1e-12 (500 instances)")
def test_c7_discretize_preserves_tv():
    rng = np.random.default_rng(71)
    bad = 0
    for _ in SEEDS7:
        r, spec = random_ratio(rng, int(rng.integers(1, 40))), random_spec(rng)
        bad += abs(tv_functional(discretize(r, spec)) - tv_functional(r)) > 1e-12
    assert bad == 0


@pytest.mark.criterion("7.2", "TV(R) <= TV(cR) for c in [0, 1] (500 instances)")
def test_c7_scale_monotone():
    rng = np.random.default_rng(72)
    bad = 0
    for _ in SEEDS7:
        r, c = random_ratio(rng, int(rng.integers(1, 20))), rng.random()
        bad += tv_functional(scale(r, c)) < tv_functional(r) - 1e-10
    assert bad == 0


@pytest.mark.criterion("7.3", "conditional expectation never increases TV, keeps it when {R<1} is measurable (500 instances)")
def test_c7_conditioning():
    rng = np.random.default_rng(73)
    bad = 0
    for _ in SEEDS7:
        r = random_ratio(rng, int(rng.integers(2, 20)))
        # random partition of the atoms into groups
        groups = rng.integers(0, max(1, len(r) // 2), size=len(r))
        mass = np.bincount(groups, weights=r.probs)
        pm = np.bincount(groups, weights=r.probs * r.values)
        cond = AtomicRatio.from_atoms((pm / np.where(mass > 0, mass, 1))[groups], r.probs)
        bad += tv_functional(cond) > tv_functional(r) + 1e-10
        # refine by {R < 1}: then the conditional ratio keeps TV
        groups2 = groups * 2 + (r.values < 1)
        mass = np.bincount(groups2, weights=r.probs)
        pm = np.bincount(groups2, weights=r.probs * r.values)
        cond2 = AtomicRatio.from_atoms((pm / np.where(mass > 0, mass, 1))[groups2], r.probs)
        bad += abs(tv_functional(cond2) - tv_functional(r)) > 1e-10
    assert bad == 0


@pytest.mark.criterion("7.4", "TV(R) <= TV(R o S) (500 instances)")
def test_c7_product_monotone():
    rng = np.random.default_rng(74)
    bad = 0
    for _ in SEEDS7:
        a, b = random_ratio(rng, int(rng.integers(1, 10))), random_ratio(rng, int(rng.integers(1, 10)))
        bad += tv_functional(independent_product(a, b)) < max(tv_functional(a), tv_functional(b)) - 1e-10
    assert bad == 0


@pytest.mark.criterion("7.5", "discretization error bounds below and above 1 (500 instances)")
def test_c7_discretization_error():
    rng = np.random.default_rng(75)
    bad = 0
    for _ in SEEDS7:
        r, spec = random_ratio(rng, int(rng.integers(1, 40))), random_spec(rng)
        bound = spec.gamma + spec.delta * tv_functional(r)
        one, two = _d2_terms(r, spec)
        bad += (one > bound + 1e-10) + (two > bound + 1e-10)
    assert bad == 0


@pytest.mark.criterion("7.6", "product drift <= n delta kappa + n gamma (500 families)")
def test_c7_product_drift():
    rng = np.random.default_rng(76)
    bad = 0
    for _ in SEEDS7:
        n = int(rng.integers(1, 6))
        rs = [random_ratio(rng, int(rng.integers(1, 5))) for _ in range(n)]
        spec = random_spec(rng)
        full, disc = AtomicRatio.identity(), AtomicRatio.identity()
        for r in rs:
            full = independent_product(full, r)
            disc = independent_product(disc, discretize(r, spec))
        kappa = max(tv_functional(r) for r in rs)
        drift = abs(tv_functional(full) - tv_functional(disc))
        bad += drift > n * spec.delta * kappa + n * spec.gamma + 1e-10
    assert bad == 0


# --------------------------------------------------------------------------- 8
@pytest.mark.criterion(8, "erf_approx within eps of the multiprecision reference on [0, 20]")
def test_c8_erf():
    xs = np.round(np.arange(0, 201) * 0.1, 10)
    ref = np.array([erf_reference(x) for x in xs])
    for eps in (1e-3, 1e-6, 1e-9, 1e-12):
        err = np.abs(erf_approx(xs, eps) - ref)
        print(f"c8 eps={eps:g}: max error {err.max():.2e} ({err.max() / eps:.3f} of eps)")
        assert np.all(err <= eps)


# --------------------------------------------------------------------------- 9
@pytest.mark.criterion(9, "degenerate inputs: exact 0/1 and projected pairs within eps")
def test_c9_exact_cases():
    assert mult_gaussian_tv(G([0, 0], np.eye(2)), G([0, 0], np.diag([1.0, 0.0])), 0.1).estimate == 1.0
    assert mult_gaussian_tv(G([1, 2], [[2, 1], [1, 2]]), G([1, 2], [[2, 1], [1, 2]]), 0.1).estimate == 0.0
    shifted = mult_gaussian_tv(G([0, 0], np.diag([1.0, 0.0])), G([0, 1], np.diag([1.0, 0.0])), 0.1)
    assert shifted.estimate == 1.0


@pytest.mark.criterion(9, "degenerate inputs: exact 0/1 and projected pairs within eps")
def test_c9_aligned_support_1d():
    # rank-1 covariances on the line spanned by u in R^2, means offset along u
    u = np.array([3.0, 4.0]) / 5.0
    p1 = G([1.0, 1.0], 2.0 * np.outer(u, u))
    p2 = G(np.array([1.0, 1.0]) + 0.7 * u, 0.5 * np.outer(u, u))
    ref = quadrature_tv_1d((0.0, 2.0), (0.7, 0.5))
    res = mult_gaussian_tv(p1, p2, 0.05)
    assert res.diagnostics.rank == 1
    assert abs(res.estimate - ref) <= 0.05 * ref


@pytest.mark.criterion(9, "degenerate inputs: exact 0/1 and projected pairs within eps")
def test_c9_aligned_support_2d():
    rng = np.random.default_rng(9)
    basis, _ = np.linalg.qr(rng.normal(size=(3, 2)))  # orthonormal columns, a plane in R^3
    a1 = np.array([[1.5, 0.3], [0.3, 0.8]])
    a2 = np.array([[1.0, -0.2], [-0.2, 1.3]])
    m1, m2 = rng.normal(size=3), np.array([0.4, -0.3])
    p1 = G(m1, basis @ a1 @ basis.T)
    p2 = G(m1 + basis @ m2, basis @ a2 @ basis.T)
    ref = _grid_reference(G([0, 0], a1), G(m2, a2))
    res = mult_gaussian_tv(p1, p2, 0.1)
    assert res.diagnostics.rank == 2
    assert abs(res.estimate - ref.value) <= 0.1 * ref.value


# -------------------------------------------------------------------------- 10
@pytest.fixture(scope="module")
def scale_run():
    rng = np.random.default_rng(10)
    n = 50

    def dd(scale):
        b = rng.normal(scale=scale, size=(n, n))
        s = 0.5 * (b + b.T)
        np.fill_diagonal(s, np.abs(s).sum(axis=1) + rng.uniform(0.5, 1.5, n))
        return s

    p1, p2 = G(rng.normal(scale=0.05, size=n), dd(0.02)), G(np.zeros(n), dd(0.02))
    res, secs = timed(mult_gaussian_tv, p1, p2, 0.1)
    return res, secs


@pytest.mark.slow
@pytest.mark.criterion("10.1", "n = 50, eps = 0.1 completes in < 60 s")
def test_c10_runtime(scale_run):
    res, secs = scale_run
    d = res.diagnostics
    print(f"c10: z={res.estimate:.6g} t={secs:.1f}s M={d.alphabet_size} engine={d.disprod_engine} "
          f"bound={d.disprod_error_bound}")
    assert secs < 60.0
    assert 0.0 <= res.estimate <= 1.0


@pytest.mark.slow
@pytest.mark.criterion("10.2", "alphabet size within 4x of (n/eps) ln(n/(eps Delta))")
def test_c10_alphabet_size(scale_run):
    res, _ = scale_run
    d = res.diagnostics
    formula = formula_alphabet_size(50, 0.1, d.delta)
    ratio = d.alphabet_size / formula
    print(f"c10: M={d.alphabet_size} formula={formula:.1f} ratio={ratio:.1f}")
    assert 0.25 <= ratio <= 4.0


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-v", "-s"]))

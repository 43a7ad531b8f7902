import itertools

import numpy as np
import pytest
from conftest import random_discrete_pair

from gausstv.disprod import (
    DiscreteDistributionPair,
    coordinate_tv,
    disprod_tv_det,
    disprod_tv_grid,
    disprod_tv_report,
    exact_product_tv,
    product_tv,
)
from gausstv.errors import InstanceTooLarge, InvalidInput, NotADistribution
from gausstv.ratio import discretize, independent_product, ratio_from_discrete_pair

P64 = ([0.6, 0.4], [0.5, 0.5])
P75 = ([0.75, 0.25], [0.5, 0.5])


def brute(pairs):
    # independent of exact_product_tv: plain loops over outcome tuples
    total = 0.0
    for idx in itertools.product(*(range(len(p)) for p, _ in pairs)):
        a = np.prod([p[i] for (p, _), i in zip(pairs, idx)])
        b = np.prod([q[i] for (_, q), i in zip(pairs, idx)])
        total += abs(a - b)
    return 0.5 * total


class TestCoordinateTV:
    def test_examples(self):
        assert coordinate_tv(([0.3, 0.7], [0.3, 0.7])) == 0
        assert coordinate_tv(P75) == 0.25
        assert coordinate_tv(([1, 0], [0, 1])) == 1

    def test_validation(self):
        with pytest.raises(NotADistribution):
            DiscreteDistributionPair([0.5, 0.5], [1.0])
        with pytest.raises(NotADistribution):
            DiscreteDistributionPair([0.5, 0.6], [0.5, 0.5])


class TestExact:
    def test_single(self):
        assert exact_product_tv([P75]) == 0.25

    def test_two(self):
        assert exact_product_tv([P64, P64]) == pytest.approx(0.11, abs=1e-15)
        assert exact_product_tv([P75, P75]) == pytest.approx(0.3125, abs=1e-15)

    def test_identical(self):
        assert exact_product_tv([([0.2, 0.8], [0.2, 0.8])] * 3) == 0

    def test_matches_brute_force(self, rng):
        for _ in range(30):
            pairs = [random_discrete_pair(rng, int(rng.integers(1, 5))) for _ in range(int(rng.integers(1, 6)))]
            assert exact_product_tv(pairs) == pytest.approx(brute(pairs), abs=1e-13)

    def test_large_head_block(self, rng):
        # more than 2^16 outcomes forces the enumerated tail
        pairs = [random_discrete_pair(rng, 5) for _ in range(8)]
        val = exact_product_tv(pairs)
        assert 0 <= val <= 1
        # compare with an explicit joint table
        jp, jq = np.ones(1), np.ones(1)
        for p, q in pairs:
            jp, jq = np.multiply.outer(jp, p).ravel(), np.multiply.outer(jq, q).ravel()
        assert val == pytest.approx(0.5 * np.abs(jp - jq).sum(), abs=1e-12)

    def test_guard(self):
        with pytest.raises(InstanceTooLarge):
            exact_product_tv([([0.1] * 10, [0.1] * 10)] * 8)


class TestDet:
    def test_single_is_exact(self):
        for eps in (0.3, 0.01):
            assert disprod_tv_det([P75], eps) == 0.25

    @pytest.mark.parametrize("pair, exact", [(P64, 0.11), (P75, 0.3125)])
    def test_two_coordinates(self, pair, exact):
        assert abs(disprod_tv_det([pair, pair], 0.05) - exact) <= 0.05 * exact

    def test_zero(self):
        rep = disprod_tv_report([([0.5, 0.5], [0.5, 0.5])] * 3, 0.1)
        assert rep.estimate == 0 and rep.engine == "exact-zero"

    def test_atom_counts(self, rng):
        for _ in range(30):
            pairs = [random_discrete_pair(rng, int(rng.integers(2, 6))) for _ in range(int(rng.integers(2, 6)))]
            rep = disprod_tv_report(pairs, 0.1)
            if rep.engine == "exact-zero":
                continue
            size = 2 * rep.m + 1
            assert rep.max_atoms <= size
            # an undiscretized step is at most (partition size) x (alphabet size)
            from gausstv.ratio import build_partition

            spec = build_partition(rep.gamma, rep.small_delta)
            y = discretize(ratio_from_discrete_pair(*pairs[0]), spec)
            for p, q in pairs[1:]:
                full = independent_product(y, ratio_from_discrete_pair(p, q))
                assert len(full) <= len(p) * size
                y = discretize(full, spec)

    def test_order_insensitive(self, rng):
        for _ in range(20):
            pairs = [random_discrete_pair(rng, 3) for _ in range(4)]
            exact = exact_product_tv(pairs)
            for perm in itertools.islice(itertools.permutations(pairs), 6):
                assert abs(disprod_tv_det(list(perm), 0.1) - exact) <= 0.1 * exact + 1e-15

    def test_smaller_eps_stays_in_band(self, rng):
        pairs = [random_discrete_pair(rng, 4) for _ in range(4)]
        exact = exact_product_tv(pairs)
        for eps in (0.3, 0.1, 0.03):
            assert abs(disprod_tv_det(pairs, eps) - exact) <= 0.3 * exact

    def test_bad_eps(self):
        with pytest.raises(InvalidInput):
            disprod_tv_det([P75], 1.0)
        with pytest.raises(InvalidInput):
            disprod_tv_det([], 0.1)


class TestGrid:
    def test_matches_exact(self, rng):
        worst = 0.0
        for _ in range(40):
            pairs = [random_discrete_pair(rng, int(rng.integers(2, 6))) for _ in range(int(rng.integers(1, 6)))]
            exact = exact_product_tv(pairs)
            if exact == 0:
                continue
            rep = disprod_tv_grid(pairs, 0.1)
            assert rep.error_bound <= 0.1 * rep.coordinate_tv_max
            assert abs(rep.estimate - exact) <= rep.error_bound + 1e-12
            worst = max(worst, abs(rep.estimate - exact) / exact)
        assert worst <= 0.1

    def test_dispatch(self):
        assert product_tv([P75, P64], 0.1).engine == "partition"
        assert product_tv([P75, P64], 0.1, engine="grid").engine == "grid"
        with pytest.raises(InvalidInput):
            product_tv([P75], 0.1, engine="nope")

"""Shared fixtures and the acceptance summary printed after the run."""

import numpy as np
import pytest

from gausstv.gaussian_model import GaussianParams

_RESULTS = {}


def random_spd(rng, n, spread=1.0):
    """Random SPD matrix with eigenvalues in roughly [0.2, 0.2 + 2 * spread]."""
    q, _ = np.linalg.qr(rng.normal(size=(n, n)))
    lam = 0.2 + 2.0 * spread * rng.random(n)
    s = (q * lam) @ q.T
    return 0.5 * (s + s.T)


def random_gaussian(rng, n, shift=1.0, spread=1.0):
    return GaussianParams(shift * rng.normal(size=n), random_spd(rng, n, spread))


@pytest.fixture
def rng():
    return np.random.default_rng(20261019)


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.failed):
        return
    for key, label in _criteria(report):
        prev = _RESULTS.get(key)
        ok = report.passed
        _RESULTS[key] = (label, ok if prev is None else prev[1] and ok)


def _criteria(report):
    out = []
    for name, args in getattr(report, "user_properties", []):
        if name == "criterion":
            out.append(args)
    return out


def pytest_collection_modifyitems(items):
    for item in items:
        for mark in item.iter_markers("criterion"):
            item.user_properties.append(("criterion", (str(mark.args[0]), mark.args[1])))


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")

    def order(key):
        head, _, tail = key.partition(".")
        return int(head), tail

    for key in sorted(_RESULTS, key=order):
        label, ok = _RESULTS[key]
        terminalreporter.write_line(f"criterion {key:<4} {'PASS' if ok else 'FAIL'}  {label}")


def random_discrete_pair(rng, size, singular=True, closeness=None):
    """Random (p, q) of length ``size``; q may vanish on the last cell."""
    if size == 1:
        return np.ones(1), np.ones(1)
    q = rng.dirichlet(np.ones(size))
    if singular and size > 1 and rng.random() < 0.3:
        q[-1] = 0.0
        q /= q.sum()
    t = rng.random() if closeness is None else closeness
    p = (1 - t) * q + t * rng.dirichlet(np.ones(size))
    if size > 2 and rng.random() < 0.2:
        # force an atom with ratio exactly 1 (with two cells this would make p = q)
        p[0] = q[0]
        rest = p[1:].sum()
        if rest > 0:
            p[1:] *= (1 - q[0]) / rest
    p = np.maximum(p, 0.0)
    return p / p.sum(), q


def random_ratio(rng, atoms):
    from gausstv.ratio import ratio_from_discrete_pair

    p, q = random_discrete_pair(rng, atoms)
    return ratio_from_discrete_pair(p, q)


def random_spec(rng):
    from gausstv.ratio import build_partition

    return build_partition(10 ** rng.uniform(-3, -0.3), 10 ** rng.uniform(-2, 0))

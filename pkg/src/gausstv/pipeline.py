"""End-to-end relative-error TV distance between two multivariate Gaussians."""

import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .discretizer import build_discrete_products
from .disprod import product_tv
from .errors import GaussTVError, InvalidInput, NumericalFailure
from .gaussian_model import GaussianParams, condition_number, resolve_rank_case
from .reduction import whiten_pair


@dataclass(frozen=True)
class Diagnostics:
    rank_case: str
    delta: float = None
    gamma: float = None
    small_delta: float = None
    m: int = None
    alphabet_size: int = None
    zeta: float = None
    kappa1: float = None
    kappa2: float = None
    diag_residuals: tuple = None
    budget_split: tuple = None
    rank: int = None
    disprod_engine: str = None
    disprod_m: int = None
    disprod_max_atoms: int = None
    disprod_error_bound: float = None
    mass_gap: float = None
    endpoint_error: float = None


@dataclass(frozen=True)
class TvResult:
    estimate: float
    eps: float
    diagnostics: Diagnostics = field(default=None)

    def to_dict(self, diagnostics=True):
        out = {"tv_estimate": self.estimate, "eps": self.eps}
        if diagnostics and self.diagnostics is not None:
            out["diagnostics"] = {k: _plain(v) for k, v in asdict(self.diagnostics).items()}
        return out


def _plain(v):
    if isinstance(v, (tuple, list)):
        return [_plain(x) for x in v]
    if isinstance(v, (np.floating, np.integer)):
        return v.item()
    return v


def _check_eps(eps):
    eps = float(eps)
    if not (0.0 < eps < 1.0):
        raise InvalidInput(f"eps must lie in (0, 1), got {eps!r}", stage="input")
    return eps


def mult_gaussian_tv(p1, p2, eps, engine="auto"):
    """TV distance between ``N(mu1, S1)`` and ``N(mu2, S2)`` to relative error ``eps``.

    Parameters
    ----------
    p1, p2 : GaussianParams
    eps : float
        Relative error in (0, 1). The Gaussian discretization runs with
        ``eps`` (relative error ``eps/3``) and the product stage with ``eps/2``.
    engine : {"auto", "partition", "grid"}
        Product-stage engine, see :func:`gausstv.disprod.product_tv`.

    Returns
    -------
    TvResult
    """
    eps = _check_eps(eps)
    if not isinstance(p1, GaussianParams):
        p1 = GaussianParams(*p1)
    if not isinstance(p2, GaussianParams):
        p2 = GaussianParams(*p2)
    case = resolve_rank_case(p1, p2)
    if case.kind != "full_rank":
        return TvResult(case.distance, eps, Diagnostics(case.kind))

    q1, q2 = case.pair
    try:
        pair, wrep = whiten_pair(q1, q2)
    except np.linalg.LinAlgError as exc:
        raise NumericalFailure(str(exc), stage="whiten") from None
    base = dict(
        rank_case=case.kind,
        rank=case.rank,
        kappa1=condition_number(q1.covariance),
        kappa2=wrep.kappa2,
        diag_residuals=tuple(wrep.residuals),
        budget_split=(eps, eps / 2),
    )
    if np.all(pair.mu == 0.0) and np.all(pair.sigma2 == 1.0):
        return TvResult(0.0, eps, Diagnostics(delta=0.0, **base))

    pairs, brep = build_discrete_products(pair, eps)
    rep = product_tv(pairs, eps / 2, engine=engine)
    est = float(min(1.0, max(0.0, rep.estimate)))
    diag = Diagnostics(
        delta=brep.delta,
        gamma=brep.gamma,
        small_delta=brep.small_delta,
        m=brep.m,
        alphabet_size=brep.alphabet_size,
        zeta=brep.zeta,
        mass_gap=brep.max_mass_gap,
        endpoint_error=float(brep.endpoint_error),
        disprod_engine=rep.engine,
        disprod_m=rep.m,
        disprod_max_atoms=rep.max_atoms,
        disprod_error_bound=None if rep.error_bound is None else float(rep.error_bound),
        **base,
    )
    return TvResult(est, eps, diag)


def budget_band_ok(eps):
    """True when ``(1 + eps/3)(1 + eps/2) <= 1 + eps`` and ``(1 - eps/3)(1 - eps/2) >= 1 - eps``."""
    return (1 + eps / 3) * (1 + eps / 2) <= 1 + eps and (1 - eps / 3) * (1 - eps / 2) >= 1 - eps


def formula_alphabet_size(n, eps, delta):
    """``(n/eps) ln(n/(eps delta))``, the alphabet-size growth rate with constant 1."""
    return (n / eps) * math.log(n / (eps * delta))


__all__ = ["Diagnostics", "TvResult", "mult_gaussian_tv", "GaussTVError"]

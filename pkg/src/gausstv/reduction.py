"""Whitening a full-rank Gaussian pair to N(mu, diag(sigma2)) versus N(0, I).

Eigendecompositions come from LAPACK (``numpy.linalg.eigh``) and are treated
as an untrusted oracle: every result is checked for orthogonality and
reconstruction residual before use.
"""

import os
from dataclasses import dataclass

import numpy as np

from .errors import InvalidInput, ResidualTooLarge, SingularCovariance
from .gaussian_model import GaussianParams

DEFAULT_DIAG_RESIDUAL = 1e-10


def diag_residual_budget():
    """Relative residual budget; ``GAUSSTV_DIAG_RESIDUAL`` overrides the default."""
    raw = os.environ.get("GAUSSTV_DIAG_RESIDUAL")
    if raw is None:
        return DEFAULT_DIAG_RESIDUAL
    try:
        val = float(raw)
    except ValueError:
        raise InvalidInput(f"GAUSSTV_DIAG_RESIDUAL={raw!r} is not a number", stage="whiten") from None
    if not val > 0:
        raise InvalidInput("GAUSSTV_DIAG_RESIDUAL must be positive", stage="whiten")
    return val


@dataclass(frozen=True)
class EigenDecomposition:
    q: np.ndarray
    lam: np.ndarray  # descending
    orthogonality_residual: float
    reconstruction_residual: float


@dataclass(frozen=True)
class ProductGaussianPair:
    """``N(mu, diag(sigma2))`` against the standard normal in the same dimension."""

    mu: np.ndarray
    sigma2: np.ndarray

    def __post_init__(self):
        mu = np.atleast_1d(np.asarray(self.mu, dtype=float))
        s2 = np.atleast_1d(np.asarray(self.sigma2, dtype=float))
        if mu.shape != s2.shape or mu.ndim != 1:
            raise InvalidInput("mu and sigma2 must be vectors of equal length", stage="whiten")
        if not (np.isfinite(s2).all() and (s2 > 0).all() and np.isfinite(mu).all()):
            raise InvalidInput("sigma2 must be finite and positive, mu finite", stage="whiten")
        object.__setattr__(self, "mu", mu)
        object.__setattr__(self, "sigma2", s2)

    @property
    def dim(self):
        return self.mu.shape[0]


@dataclass(frozen=True)
class WhitenReport:
    residuals: tuple  # reconstruction residuals of the two decompositions
    orthogonality: tuple
    kappa1: float
    kappa2: float
    budget: float


def symmetric_eigendecompose(s, budget=None):
    """Validated eigendecomposition of a symmetric positive definite matrix.

    Raises
    ------
    ResidualTooLarge
        If ``||q'q - I||_F > budget * n`` or
        ``||S - q diag(lam) q'||_F > budget * ||S||_F``.
    SingularCovariance
        If an eigenvalue is not strictly positive.
    """
    if budget is None:
        budget = diag_residual_budget()
    s = np.asarray(s, dtype=float)
    s = 0.5 * (s + s.T)
    n = s.shape[0]
    lam, q = np.linalg.eigh(s)
    lam, q = lam[::-1], q[:, ::-1]
    if lam[-1] <= 0:
        raise SingularCovariance(f"eigenvalue {lam[-1]:g} is not positive", stage="whiten")
    orth = float(np.linalg.norm(q.T @ q - np.eye(n)))
    if orth > budget * n:
        raise ResidualTooLarge(orth, budget * n, "orthogonality", stage="whiten")
    norm_s = float(np.linalg.norm(s))
    recon = float(np.linalg.norm(s - (q * lam) @ q.T))
    if recon > budget * norm_s:
        raise ResidualTooLarge(recon, budget * norm_s, "reconstruction", stage="whiten")
    return EigenDecomposition(q, lam, orth, recon / norm_s if norm_s else 0.0)


def whiten_pair(p1, p2, budget=None):
    """Map ``(N(mu1, S1), N(mu2, S2))`` to an equivalent product pair.

    With ``S2 = Q2 L2 Q2'`` and ``A = Q2 L2^(-1/2) Q2'``, decompose
    ``A S1 A' = Q1 L1 Q1'``; the result is ``mu = Q1' A (mu1 - mu2)`` and
    ``sigma2 = L1``. Returns ``(ProductGaussianPair, WhitenReport)``.
    """
    if budget is None:
        budget = diag_residual_budget()
    if p1.dim != p2.dim:
        raise InvalidInput(f"dimension mismatch: {p1.dim} vs {p2.dim}", stage="whiten")
    d2 = symmetric_eigendecompose(p2.covariance, budget)
    a = (d2.q / np.sqrt(d2.lam)) @ d2.q.T
    inner = a @ p1.covariance @ a.T
    d1 = symmetric_eigendecompose(inner, budget)
    mu = d1.q.T @ (a @ (p1.mean - p2.mean))
    eig1 = np.linalg.eigvalsh(0.5 * (p1.covariance + p1.covariance.T))
    if eig1[0] <= 0:
        raise SingularCovariance("sigma1 is not positive definite", stage="whiten")
    report = WhitenReport(
        residuals=(d2.reconstruction_residual, d1.reconstruction_residual),
        orthogonality=(d2.orthogonality_residual, d1.orthogonality_residual),
        kappa1=float(eig1[-1] / eig1[0]),
        kappa2=float(d2.lam[0] / d2.lam[-1]),
        budget=budget,
    )
    return ProductGaussianPair(mu, d1.lam.copy()), report


def as_gaussians(pair):
    """The two sides of a product pair as :class:`GaussianParams`."""
    return (
        GaussianParams(pair.mu, np.diag(pair.sigma2)),
        GaussianParams(np.zeros(pair.dim), np.eye(pair.dim)),
    )

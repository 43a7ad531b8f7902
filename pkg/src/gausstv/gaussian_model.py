"""Gaussian inputs: validation, degenerate-rank resolution and closed-form bounds."""

from dataclasses import dataclass, field

import numpy as np

from .errors import IdenticalInputs, InvalidInput, SingularCovariance

SYMMETRY_TOL = 1e-12
PSD_TOL = 1e-10
RANK_TOL = 1e-10
SUPPORT_TOL = 1e-10


@dataclass(frozen=True)
class GaussianParams:
    """Mean vector and covariance matrix of an n-dimensional Gaussian."""

    mean: np.ndarray
    covariance: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "mean", np.atleast_1d(np.asarray(self.mean, dtype=float)))
        object.__setattr__(self, "covariance", np.atleast_2d(np.asarray(self.covariance, dtype=float)))

    @property
    def dim(self):
        return self.mean.shape[0]


@dataclass(frozen=True)
class ValidationReport:
    dimension: int
    symmetry_defect: float
    min_eigenvalue: float
    max_eigenvalue: float
    accepted: bool
    reasons: tuple = ()


@dataclass(frozen=True)
class RankCase:
    """Outcome of :func:`resolve_rank_case`.

    ``kind`` is ``"identical"`` (distance 0), ``"disjoint"`` (distance 1) or
    ``"full_rank"``, in which case ``pair`` holds the projected strictly
    positive definite Gaussians of dimension ``rank``.
    """

    kind: str
    pair: tuple = None
    rank: int = None
    projection: np.ndarray = field(default=None, repr=False)

    @property
    def distance(self):
        return {"identical": 0.0, "disjoint": 1.0}.get(self.kind)


def _eigvalsh(mat):
    return np.linalg.eigvalsh(0.5 * (mat + mat.T))


def validate(params):
    """Check shapes, finiteness, symmetry and positive semi-definiteness.

    Structural problems (non-finite entries, non-square covariance, dimension
    mismatch) raise :class:`InvalidInput`; symmetry and PSD defects are
    reported with ``accepted=False``.
    """
    mean, cov = params.mean, params.covariance
    if mean.ndim != 1:
        raise InvalidInput("mean must be a vector", stage="validate")
    if cov.ndim != 2 or cov.shape[0] != cov.shape[1]:
        raise InvalidInput(f"covariance must be square, got shape {cov.shape}", stage="validate")
    if cov.shape[0] != mean.shape[0]:
        raise InvalidInput(
            f"mean has length {mean.shape[0]} but covariance is {cov.shape[0]}x{cov.shape[1]}",
            stage="validate",
        )
    if not (np.isfinite(mean).all() and np.isfinite(cov).all()):
        raise InvalidInput("NaN or infinite entries", stage="validate")
    if mean.shape[0] == 0:
        raise InvalidInput("dimension must be positive", stage="validate")

    defect = float(np.max(np.abs(cov - cov.T)))
    eig = _eigvalsh(cov)
    lo, hi = float(eig[0]), float(eig[-1])
    reasons = []
    if defect > SYMMETRY_TOL:
        reasons.append(f"asymmetric covariance (defect {defect:g})")
    if lo < -PSD_TOL * max(hi, 1.0):
        reasons.append(f"negative eigenvalue {lo:g}")
    return ValidationReport(mean.shape[0], defect, lo, hi, not reasons, tuple(reasons))


def require_valid(params, stage="validate"):
    report = validate(params)
    if not report.accepted:
        raise InvalidInput("; ".join(report.reasons), stage=stage)
    return report


def _rank(cov):
    eig = _eigvalsh(cov)
    return int(np.sum(eig > RANK_TOL * max(1.0, eig[-1])))


def _range_basis(cov, rank):
    """Orthonormal rows spanning Range(cov), by Gram-Schmidt on its columns.

    Columns are taken in decreasing norm order; a column is kept when its
    residual after projection exceeds the rank tolerance. Falls back to the
    leading eigenvectors if the column sweep does not recover ``rank``
    directions.
    """
    n = cov.shape[0]
    scale = max(1.0, float(np.max(np.abs(cov))))
    order = np.argsort(-np.linalg.norm(cov, axis=0), kind="stable")
    basis = []
    for j in order:
        v = cov[:, j].copy()
        for _ in range(2):
            for b in basis:
                v -= (b @ v) * b
        norm = np.linalg.norm(v)
        if norm > np.sqrt(RANK_TOL) * scale:
            basis.append(v / norm)
        if len(basis) == rank:
            break
    if len(basis) != rank:
        w, vecs = np.linalg.eigh(0.5 * (cov + cov.T))
        return vecs[:, n - rank:][:, ::-1].T.copy()
    return np.array(basis).reshape(rank, n)


def _leaves_range(basis, vectors):
    """True if any vector has a relative residual outside span(basis)."""
    for v in vectors:
        resid = v - basis.T @ (basis @ v)
        if np.linalg.norm(resid) > SUPPORT_TOL * max(1.0, np.linalg.norm(v)):
            return True
    return False


def resolve_rank_case(p1, p2):
    """Split off the degenerate cases before whitening.

    Exactly equal parameters give distance 0. Different covariance ranks, or
    affine supports that differ, give distance 1. Otherwise both Gaussians are
    projected onto an orthonormal basis of Range(cov1), with the first mean
    moved to the origin.
    """
    require_valid(p1, stage="rank_case")
    require_valid(p2, stage="rank_case")
    if p1.dim != p2.dim:
        raise InvalidInput(f"dimension mismatch: {p1.dim} vs {p2.dim}", stage="rank_case")
    if np.array_equal(p1.mean, p2.mean) and np.array_equal(p1.covariance, p2.covariance):
        return RankCase("identical")

    n = p1.dim
    r1, r2 = _rank(p1.covariance), _rank(p2.covariance)
    if r1 != r2:
        return RankCase("disjoint")
    shift = p2.mean - p1.mean
    if r1 == n:
        proj = np.eye(n)
    else:
        proj = _range_basis(p1.covariance, r1)
        basis2 = _range_basis(p2.covariance, r2)
        if _leaves_range(proj, list(basis2) + [shift]):
            return RankCase("disjoint")
        if r1 == 0:
            # both are the same point mass
            return RankCase("identical")
    q1 = GaussianParams(np.zeros(r1), _sym(proj @ p1.covariance @ proj.T))
    q2 = GaussianParams(proj @ shift, _sym(proj @ p2.covariance @ proj.T))
    return RankCase("full_rank", (q1, q2), r1, proj)


def _sym(m):
    return 0.5 * (m + m.T)


def affine_transform(params, A, b):
    """Law of ``A X + b`` for ``X ~ params``."""
    A = np.atleast_2d(np.asarray(A, dtype=float))
    b = np.atleast_1d(np.asarray(b, dtype=float))
    if A.shape[1] != params.dim or b.shape[0] != A.shape[0]:
        raise InvalidInput(
            f"shape mismatch: A is {A.shape}, b has length {b.shape[0]}, dimension is {params.dim}",
            stage="affine",
        )
    return GaussianParams(A @ params.mean + b, _sym(A @ params.covariance @ A.T))


def _require_pd(cov, name):
    try:
        return np.linalg.cholesky(_sym(cov))
    except np.linalg.LinAlgError:
        raise SingularCovariance(f"{name} is not positive definite", stage="bounds") from None


def tv_upper_bound_pinsker(p1, p2):
    """Pinsker-type upper bound on the TV distance of two nondegenerate Gaussians.

    Returns ``min(1, sqrt(tr(S2^-1 S1) - n + d' S2^-1 d + ln det S2/det S1) / 2)``
    with ``d = mu1 - mu2``, i.e. ``sqrt(KL(P1 || P2) / 2)``. The radicand is
    twice a KL divergence and therefore nonnegative up to rounding.
    """
    c1 = _require_pd(p1.covariance, "sigma1")
    c2 = _require_pd(p2.covariance, "sigma2")
    n = p1.dim
    s2_inv_s1 = np.linalg.solve(p2.covariance, p1.covariance)
    d = p1.mean - p2.mean
    y = np.linalg.solve(c2, d)
    logdet1 = 2.0 * np.sum(np.log(np.diag(c1)))
    logdet2 = 2.0 * np.sum(np.log(np.diag(c2)))
    radicand = np.trace(s2_inv_s1) - n + y @ y + logdet2 - logdet1
    return float(min(1.0, 0.5 * np.sqrt(max(radicand, 0.0))))


def one_dim_lower_bound(var_ratio_gap, scaled_mean_gap):
    """``(1/200) min{1, max{|var gap|, 40 |mean gap|}}`` for a standardized 1-D pair."""
    return min(1.0, max(abs(var_ratio_gap), 40.0 * abs(scaled_mean_gap))) / 200.0


def tv_lower_bound_general(p1, p2):
    """Certified positive lower bound on the TV distance of two different Gaussians.

    Uses the coordinate marginals when some mean or variance differs;
    otherwise projects onto ``e_i + e_j`` for each covariance entry that
    differs. Both covariances must be strictly positive definite.
    """
    _require_pd(p1.covariance, "sigma1")
    _require_pd(p2.covariance, "sigma2")
    m1, m2 = p1.mean, p2.mean
    v1, v2 = np.diag(p1.covariance), np.diag(p2.covariance)
    differ = (m1 != m2) | (v1 != v2)
    if differ.any():
        idx = np.flatnonzero(differ)
        return max(
            one_dim_lower_bound((v2[i] - v1[i]) / v1[i], (m1[i] - m2[i]) / np.sqrt(v1[i]))
            for i in idx
        )
    best = 0.0
    rows, cols = np.nonzero(p1.covariance != p2.covariance)
    for i, j in zip(rows, cols):
        if i >= j:
            continue
        s1 = v1[i] + 2 * p1.covariance[i, j] + v1[j]
        s2 = v2[i] + 2 * p2.covariance[i, j] + v2[j]
        dm = (m1[i] + m1[j]) - (m2[i] + m2[j])
        best = max(best, one_dim_lower_bound((s2 - s1) / s1, dm / np.sqrt(s1)))
    if best == 0.0:
        raise IdenticalInputs("the two Gaussians are identical", stage="bounds")
    return best


def condition_number(cov):
    eig = _eigvalsh(cov)
    if eig[0] <= 0:
        return float("inf")
    return float(eig[-1] / eig[0])

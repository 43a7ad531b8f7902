"""Relative-error total variation distance between multivariate Gaussians.

The solver whitens the pair to ``N(mu, diag(sigma2))`` versus ``N(0, I)``,
discretizes each coordinate's likelihood ratio onto a geometric partition of
``[0, inf)``, and combines the coordinates with a product-distribution TV
routine. :mod:`gausstv.oracle` holds independent brute-force references.
"""

from .discretizer import CoordinateParams, DiscretePair, build_discrete_products, delta_bound, solve_level_set
from .disprod import DiscreteDistributionPair, coordinate_tv, disprod_tv_det, exact_product_tv, product_tv
from .erf_kernel import erf_approx, gaussian_interval_mass
from .errors import GaussTVError, InvalidInput, NumericalFailure
from .gaussian_model import GaussianParams, resolve_rank_case, tv_lower_bound_general, tv_upper_bound_pinsker
from .pipeline import TvResult, mult_gaussian_tv
from .ratio import AtomicRatio, build_partition, discretize, independent_product, tv_functional
from .reduction import ProductGaussianPair, whiten_pair

__all__ = [
    "AtomicRatio",
    "CoordinateParams",
    "DiscreteDistributionPair",
    "DiscretePair",
    "GaussTVError",
    "GaussianParams",
    "InvalidInput",
    "NumericalFailure",
    "ProductGaussianPair",
    "TvResult",
    "build_discrete_products",
    "build_partition",
    "coordinate_tv",
    "delta_bound",
    "discretize",
    "disprod_tv_det",
    "erf_approx",
    "exact_product_tv",
    "gaussian_interval_mass",
    "independent_product",
    "mult_gaussian_tv",
    "product_tv",
    "resolve_rank_case",
    "solve_level_set",
    "tv_functional",
    "tv_lower_bound_general",
    "tv_upper_bound_pinsker",
    "whiten_pair",
]

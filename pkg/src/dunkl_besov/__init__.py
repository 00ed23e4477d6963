"""Dunkl harmonic analysis on radial grids and Besov-Dunkl norms.

The rank-one Dunkl transform with weight |x|^(2 alpha + 1) and its radial
analogue in R^d are computed by panel quadrature; dyadic Littlewood-Paley
blocks give discrete, continuous and interpolation characterizations of
Besov-Dunkl norms.  :mod:`dunkl_besov.checks` turns the classical
inequalities of the theory into quantitative, reproducible checks.
"""

from .besov import (
    BesovParams,
    DyadicNormProfile,
    continuous_norm,
    discrete_norm,
    discrete_norm_n_indexed,
    embedding_check,
    interpolation_norm,
    k_functional,
)
from .dunkl_core import (
    GridFunction,
    convolve,
    forward_transform,
    inverse_transform,
    kernel_eval,
    laplacian_shift_symbol,
    t1_apply,
    translate,
)
from .littlewood_paley import BumpProfile, DyadicPartition, make_bump, normalize_dyadic, to_n_indexed
from .measure import QuadratureRule, WeightedMeasure, lp_norm, radial_integral
from .specfun import BesselOrder, bessel_j_normalized, gamma_fn

__version__ = "0.1.0"

__all__ = [
    "BesovParams",
    "BesselOrder",
    "BumpProfile",
    "DyadicNormProfile",
    "DyadicPartition",
    "GridFunction",
    "QuadratureRule",
    "WeightedMeasure",
    "bessel_j_normalized",
    "continuous_norm",
    "convolve",
    "discrete_norm",
    "discrete_norm_n_indexed",
    "embedding_check",
    "forward_transform",
    "gamma_fn",
    "interpolation_norm",
    "inverse_transform",
    "k_functional",
    "kernel_eval",
    "laplacian_shift_symbol",
    "lp_norm",
    "make_bump",
    "normalize_dyadic",
    "radial_integral",
    "t1_apply",
    "to_n_indexed",
    "translate",
]

#  Authors: The asianbounds developers
#
#  License: 3-clause BSD, <LICENSE>

from asianbounds.base import AsianBoundsError, DomainError, RequestValidationError, NumericalError, \
    ModelConsistencyError, OrderingViolationError, DegenerateVolumeError, PricingObject
from asianbounds.config import PricingConfig
from asianbounds.curves import RateCurve, ConstantCurve, SinusoidalCurve, TabulatedCurve, integrated_rate, \
    discount_factor, load_rate_curve
from asianbounds.grids import MonitoringGrid, uniform_discrete, continuous_uniform_approx, with_payoff_weights, \
    load_weighted_grid
from asianbounds.numerics import norm_cdf, norm_pdf, positive_part_gaussian_mean, gauss_hermite_expectation, \
    split_gaussian_expectation, maximize_scalar, minimize_scalar, OptResult
from asianbounds.gaussian_bounds import GaussianAvgModel, BoundResult, BoundsReport, kappa_of, avg_variance, \
    build_model, lb1, ub1, ub1_objective, lb2, exercise_boundary, midpoint_and_error, deterministic_price, \
    average_forward, price_bounds
from asianbounds.vwap import VolumeModel, GEstimate, REFERENCE_VOLUME_MODEL, simulate_volume_path, estimate_g, \
    save_g, load_g, vwap_bounds
from asianbounds.mc_oracle import McEstimate, mc_asian_price, mc_vwap_price

try:
    # -- Distribution mode --
    # import from _version.py generated by setuptools_scm during release
    from ._version import version as __version__
except ImportError:
    # -- Source mode --
    # use setuptools_scm to get the current version from src using git
    try:
        from setuptools_scm import get_version as _gv
        from os import path as _path
        __version__ = _gv(_path.join(_path.dirname(__file__), _path.pardir))
    except (ImportError, LookupError):
        __version__ = '0.0.0+unknown'

__all__ = [
    '__version__',
    # submodules
    'base', 'config', 'curves', 'grids', 'numerics', 'gaussian_bounds', 'vwap', 'mc_oracle', 'requests', 'cli',
    'sampling',
    # symbols
    'AsianBoundsError', 'DomainError', 'RequestValidationError', 'NumericalError', 'ModelConsistencyError',
    'OrderingViolationError', 'DegenerateVolumeError', 'PricingObject',
    'PricingConfig',
    'RateCurve', 'ConstantCurve', 'SinusoidalCurve', 'TabulatedCurve', 'integrated_rate', 'discount_factor',
    'load_rate_curve',
    'MonitoringGrid', 'uniform_discrete', 'continuous_uniform_approx', 'with_payoff_weights', 'load_weighted_grid',
    'norm_cdf', 'norm_pdf', 'positive_part_gaussian_mean', 'gauss_hermite_expectation', 'split_gaussian_expectation',
    'maximize_scalar', 'minimize_scalar', 'OptResult',
    'GaussianAvgModel', 'BoundResult', 'BoundsReport', 'kappa_of', 'avg_variance', 'build_model', 'lb1', 'ub1',
    'ub1_objective', 'lb2', 'exercise_boundary', 'midpoint_and_error', 'deterministic_price', 'average_forward',
    'price_bounds',
    'VolumeModel', 'GEstimate', 'REFERENCE_VOLUME_MODEL', 'simulate_volume_path', 'estimate_g', 'save_g', 'load_g',
    'vwap_bounds',
    'McEstimate', 'mc_asian_price', 'mc_vwap_price',
]

#  Authors: The asianbounds developers
#
#  License: 3-clause BSD, <LICENSE>
"""
Seeded Monte Carlo reference prices for the plain Asian call and the VWAP call.

Log-prices are sampled at the grid dates from exact Gaussian increments, volumes from the exact OU transition, so
there is no discretisation error. Antithetic sampling mirrors the price driver only; a sample is then the average
payoff of a path and its mirror.
"""
import logging
from functools import reduce
from typing import Optional

import numpy as np
from yamlable import yaml_info

from asianbounds.base import DomainError, PricingObject
from asianbounds.config import DEFAULT_CHUNK_SIZE
from asianbounds.curves import RateCurve
from asianbounds.grids import MonitoringGrid
from asianbounds.sampling import PRICE_STREAM, VOLUME_STREAM, RunningMoments, block_sizes, check_seed, \
    chunk_generator, run_chunks
from asianbounds.vwap import VolumeModel, volume_weights

logger = logging.getLogger(__name__)


@yaml_info(yaml_tag_ns='asianbounds')
class McEstimate(PricingObject):
    """A Monte Carlo price: sample mean, its standard error, the number of samples and the seed."""

    def __init__(self,
                 mean,    # type: float
                 stderr,  # type: float
                 paths,   # type: int
                 seed     # type: int
                 ):
        stderr = float(stderr)
        if not stderr >= 0:
            raise DomainError("stderr should be >= 0, found %r" % stderr)
        self.mean = float(mean)
        self.stderr = stderr
        self.paths = int(paths)
        self.seed = check_seed(seed)

    def contains(self,
                 value,             # type: float
                 k=3.,              # type: float
                 extra_stderr=0.    # type: float
                 ):
        # type: (...) -> bool
        """
        True if `value` lies within k combined standard errors of the mean. `extra_stderr` is the standard error
        attached to `value`, if any.
        """
        return abs(self.mean - value) <= k * np.hypot(self.stderr, extra_stderr)

    def __repr__(self):
        return "McEstimate(mean=%r, stderr=%r, paths=%d, seed=%d)" % (self.mean, self.stderr, self.paths, self.seed)


class _PathSampler(object):
    """Exact sampling of S0 e^{X_{u_i}} at the grid dates."""

    def __init__(self, curve, sigma, S0, K, grid, paths):
        # type: (RateCurve, float, float, float, MonitoringGrid, int) -> None
        if not sigma >= 0:
            raise DomainError("Volatility sigma should be >= 0, found %r" % sigma)
        if not S0 > 0:
            raise DomainError("Spot price S0 should be > 0, found %r" % S0)
        if not K >= 0:
            raise DomainError("Strike K should be >= 0, found %r" % K)
        if int(paths) != paths or paths < 2:
            raise DomainError("At least 2 paths are needed to estimate a standard error, found %r" % paths)

        dates = grid.dates
        steps = np.diff(dates, prepend=0.)
        increments = np.diff(np.asarray(curve.integrated_rate(dates), dtype=float), prepend=0.)
        self.drift = increments - 0.5 * sigma ** 2 * steps
        self.scale = sigma * np.sqrt(steps)
        self.discount = float(curve.discount_factor(grid.T))
        self.S0 = float(S0)
        self.K = float(K)
        self.n_dates = grid.n

    def prices(self, z):
        # type: (np.ndarray) -> np.ndarray
        return self.S0 * np.exp(np.cumsum(self.drift + self.scale * z, axis=1))

    def payoff(self, averages):
        # type: (np.ndarray) -> np.ndarray
        return self.discount * np.maximum(averages - self.K, 0.)


def _estimate(simulate_chunk, paths, seed, chunk_size, workers, what):
    moments = run_chunks(simulate_chunk, paths, chunk_size, workers)
    res = McEstimate(moments.mean, moments.stderr(), moments.n, seed)
    logger.info("%s Monte Carlo price %.6g (stderr %.3g) from %d samples, seed=%d", what, res.mean, res.stderr,
                res.paths, seed)
    return res


def mc_asian_price(curve,                          # type: RateCurve
                   sigma,                          # type: float
                   S0,                             # type: float
                   K,                              # type: float
                   grid,                           # type: MonitoringGrid
                   paths,                          # type: int
                   seed,                           # type: int
                   antithetic=True,                # type: bool
                   chunk_size=DEFAULT_CHUNK_SIZE,  # type: int
                   workers=None                    # type: Optional[int]
                   ):
    # type: (...) -> McEstimate
    """
    Monte Carlo price of the call e^{-R_T} (sum_i p_i S_{u_i} - K)^+.

    :param paths: number of samples, >= 2. With `antithetic` each sample is the average over a path and its mirror.
    :param seed: 64-bit seed; the price stream is used
    :param workers: number of threads, None for all cores. Never changes the result.
    :return:
    """
    seed = check_seed(seed)
    sampler = _PathSampler(curve, sigma, S0, K, grid, paths)
    p = grid.p

    def simulate_chunk(chunk_index, n_paths):
        # type: (int, int) -> RunningMoments
        rng = chunk_generator(seed, chunk_index, PRICE_STREAM)
        parts = []
        for n in block_sizes(n_paths, sampler.n_dates):
            z = rng.standard_normal((n, sampler.n_dates))
            samples = sampler.payoff(sampler.prices(z).dot(p))
            if antithetic:
                samples = 0.5 * (samples + sampler.payoff(sampler.prices(-z).dot(p)))
            parts.append(RunningMoments.from_samples(samples))
        return reduce(RunningMoments.merge, parts)

    return _estimate(simulate_chunk, paths, seed, chunk_size, workers, "Asian")


def mc_vwap_price(curve,                          # type: RateCurve
                  sigma,                          # type: float
                  S0,                             # type: float
                  K,                              # type: float
                  grid,                           # type: MonitoringGrid
                  volume,                         # type: VolumeModel
                  paths,                          # type: int
                  seed,                           # type: int
                  antithetic=True,                # type: bool
                  chunk_size=DEFAULT_CHUNK_SIZE,  # type: int
                  workers=None                    # type: Optional[int]
                  ):
    # type: (...) -> McEstimate
    """
    Monte Carlo price of the VWAP call e^{-R_T} (sum_j w_j S_j U_j / sum_k w_k U_k - K)^+, with price and volume
    drawn from independent streams of the same seed. The volume path is shared by a price path and its mirror.
    """
    seed = check_seed(seed)
    sampler = _PathSampler(curve, sigma, S0, K, grid, paths)
    w = grid.w

    def simulate_chunk(chunk_index, n_paths):
        # type: (int, int) -> RunningMoments
        price_rng = chunk_generator(seed, chunk_index, PRICE_STREAM)
        volume_rng = chunk_generator(seed, chunk_index, VOLUME_STREAM)
        parts = []
        for n in block_sizes(n_paths, sampler.n_dates):
            z = price_rng.standard_normal((n, sampler.n_dates))
            weights = volume_weights(volume.simulate(grid.dates, volume_rng, n), w) * w
            samples = sampler.payoff((sampler.prices(z) * weights).sum(axis=1))
            if antithetic:
                samples = 0.5 * (samples + sampler.payoff((sampler.prices(-z) * weights).sum(axis=1)))
            parts.append(RunningMoments.from_samples(samples))
        return reduce(RunningMoments.merge, parts)

    return _estimate(simulate_chunk, paths, seed, chunk_size, workers, "VWAP")

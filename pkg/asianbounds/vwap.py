#  Authors: The asianbounds developers
#
#  License: 3-clause BSD, <LICENSE>
"""
Options on the volume-weighted average price.

Volume is the square of an Ornstein-Uhlenbeck process, U_t = Y_t^2 with dY = lam (theta - Y) dt + eta dB, independent
of the price. Under independence the VWAP bounds are the plain Gaussian bounds with payoff weights g_i w_i, where
g_t = E[U_t / Ubar] is estimated by Monte Carlo.
"""
import logging
from functools import reduce
from typing import Any, Dict, Optional, Sequence, Tuple

import numpy as np
from yamlable import yaml_info

from asianbounds.base import DegenerateVolumeError, DomainError, PathOrStream, PricingObject, as_float_vector, \
    open_text, read_numeric_table
from asianbounds.config import DEFAULT_A_BRACKET, DEFAULT_CHUNK_SIZE, DEFAULT_HERMITE_NODES, DEFAULT_OPT_TOL, \
    DEFAULT_Z_WIDTH
from asianbounds.curves import RateCurve
from asianbounds.gaussian_bounds import BoundResult, build_model, lb1, ub1
from asianbounds.grids import MonitoringGrid, with_payoff_weights
from asianbounds.sampling import VOLUME_STREAM, RunningMoments, block_sizes, check_seed, chunk_generator, \
    run_chunks

logger = logging.getLogger(__name__)

DEFAULT_G_PATHS = 10 ** 6
DATE_MATCH_TOL = 1e-12


@yaml_info(yaml_tag_ns='asianbounds')
class VolumeModel(PricingObject):
    """
    Squared OU volume model.

    :param lam: mean-reversion rate per year, > 0
    :param theta: long-run level of Y
    :param eta: diffusion coefficient of Y, >= 0
    :param x0: initial level Y_0
    """

    def __init__(self,
                 lam,    # type: float
                 theta,  # type: float
                 eta,    # type: float
                 x0      # type: float
                 ):
        lam, theta, eta, x0 = float(lam), float(theta), float(eta), float(x0)
        if not (np.isfinite(lam) and lam > 0):
            raise DomainError("Mean-reversion rate lam should be > 0, found %r" % lam)
        if not (np.isfinite(eta) and eta >= 0):
            raise DomainError("Diffusion coefficient eta should be >= 0, found %r" % eta)
        if not (np.isfinite(theta) and np.isfinite(x0)):
            raise DomainError("theta and x0 should be finite, found %r and %r" % (theta, x0))
        self.lam = lam
        self.theta = theta
        self.eta = eta
        self.x0 = x0

    def stationary_variance(self):
        # type: (...) -> float
        """eta^2 / (2 lam), the stationary variance of Y."""
        return self.eta ** 2 / (2 * self.lam)

    def stationary_second_moment(self):
        # type: (...) -> float
        """theta^2 + eta^2 / (2 lam), the long-run mean volume E U_t."""
        return self.theta ** 2 + self.stationary_variance()

    def simulate(self,
                 dates,    # type: np.ndarray
                 rng,      # type: np.random.Generator
                 n_paths   # type: int
                 ):
        # type: (...) -> np.ndarray
        """
        Samples volumes at `dates` (increasing, from time 0 and Y_0 = x0) with the exact Gaussian OU transition

            Y_{t+d} = theta + (Y_t - theta) e^{-lam d} + eta sqrt((1 - e^{-2 lam d}) / (2 lam)) xi

        :return: an array of shape (n_paths, len(dates)) of U = Y^2
        """
        steps = np.diff(dates, prepend=0.)
        decay = np.exp(-self.lam * steps)
        scale = self.eta * np.sqrt(-np.expm1(-2 * self.lam * steps) / (2 * self.lam))
        xi = rng.standard_normal((n_paths, len(dates)))

        out = np.empty((n_paths, len(dates)))
        y = np.full(n_paths, self.x0)
        for i in range(len(dates)):
            y = self.theta + (y - self.theta) * decay[i] + scale[i] * xi[:, i]
            out[:, i] = y
        return out ** 2

    def __eq__(self, other):
        return isinstance(other, VolumeModel) and vars(self) == vars(other)

    def __repr__(self):
        return "VolumeModel(lam=%r, theta=%r, eta=%r, x0=%r)" % (self.lam, self.theta, self.eta, self.x0)


REFERENCE_VOLUME_MODEL = VolumeModel(lam=2., theta=22., eta=5., x0=22.)


def simulate_volume_path(model,  # type: VolumeModel
                         grid,   # type: MonitoringGrid
                         seed    # type: int
                         ):
    # type: (...) -> np.ndarray
    """One volume path U_{u_1}, ..., U_{u_N}, drawn from chunk 0 of the volume stream of `seed`."""
    return model.simulate(grid.dates, chunk_generator(seed, 0, VOLUME_STREAM), 1)[0]


def volume_weights(volumes,  # type: np.ndarray
                   w         # type: np.ndarray
                   ):
    # type: (...) -> np.ndarray
    """U_i / Ubar per path with Ubar = sum_j w_j U_j. Raises a DegenerateVolumeError for a zero-volume path."""
    ubar = volumes.dot(w)
    zero = ubar <= 0
    if np.any(zero):
        raise DegenerateVolumeError("A simulated volume path has zero average volume (path %d of the block), "
                                    "volume weights are undefined" % int(np.argmax(zero)))
    return volumes / ubar[:, None]


@yaml_info(yaml_tag_ns='asianbounds')
class GEstimate(PricingObject):
    """
    Monte Carlo estimate of g_i = E[U_{u_i} / Ubar] at the monitoring dates.

    `stderr` is NaN when unknown (e.g. loaded from a text file), `paths` is 0 and `seed` None for hand-written files.
    """

    def __init__(self,
                 dates,    # type: Sequence[float]
                 g,        # type: Sequence[float]
                 stderr,   # type: Sequence[float]
                 paths,    # type: int
                 seed      # type: Optional[int]
                 ):
        dates = as_float_vector(dates, 'dates')
        g = as_float_vector(g, 'g')
        stderr = np.array(stderr, dtype=float).reshape(-1)
        stderr.setflags(write=False)
        if not (len(dates) == len(g) == len(stderr)) or len(g) == 0:
            raise DomainError("dates, g and stderr should be non-empty and of the same length, found %d, %d, %d"
                              % (len(dates), len(g), len(stderr)))
        if np.any(g < 0):
            raise DomainError("g should be >= 0, found %r" % g)
        if np.any(stderr < 0):
            raise DomainError("stderr should be >= 0, found %r" % stderr)
        self.dates = dates
        self.g = g
        self.stderr = stderr
        self.paths = int(paths)
        self.seed = None if seed is None else check_seed(seed)

    def __to_yaml_dict__(self):
        # type: (...) -> Dict[str, Any]
        return {'dates': self.dates.tolist(), 'g': self.g.tolist(), 'stderr': self.stderr.tolist(),
                'paths': self.paths, 'seed': self.seed}

    def check_dates(self, grid):
        # type: (MonitoringGrid) -> None
        """Raises a DomainError if this estimate was not computed on the dates of `grid`."""
        if len(self.dates) != grid.n or np.any(np.abs(self.dates - grid.dates) > DATE_MATCH_TOL * grid.T):
            raise DomainError("g was estimated on %d dates that do not match the %d grid dates"
                              % (len(self.dates), grid.n))

    def __repr__(self):
        return "GEstimate(n=%d, paths=%d, seed=%r)" % (len(self.g), self.paths, self.seed)


def estimate_g(model,                          # type: VolumeModel
               grid,                           # type: MonitoringGrid
               paths=DEFAULT_G_PATHS,          # type: int
               seed=0,                         # type: int
               chunk_size=DEFAULT_CHUNK_SIZE,  # type: int
               workers=None                    # type: Optional[int]
               ):
    # type: (...) -> GEstimate
    """
    Estimates g_i = E[U_{u_i} / Ubar], Ubar = sum_j w_j U_j, by direct Monte Carlo. The result depends on `seed` only,
    not on `workers`.

    :param model: the volume model
    :param grid: the monitoring grid (its indicator weights w define Ubar)
    :param paths: number of volume paths, >= 1
    :param seed: 64-bit seed, the volume stream is used
    :param chunk_size: paths per reproducible chunk
    :param workers: number of threads, None for all cores
    :return:
    """
    seed = check_seed(seed)
    dates, w = grid.dates, grid.w

    def simulate_chunk(chunk_index, n_paths):
        # type: (int, int) -> RunningMoments
        rng = chunk_generator(seed, chunk_index, VOLUME_STREAM)
        parts = [RunningMoments.from_samples(volume_weights(model.simulate(dates, rng, n), w))
                 for n in block_sizes(n_paths, len(dates))]
        return reduce(RunningMoments.merge, parts)

    moments = run_chunks(simulate_chunk, paths, chunk_size, workers)
    stderr = moments.stderr() if moments.n >= 2 else np.full(grid.n, np.nan)
    res = GEstimate(dates, moments.mean, stderr, moments.n, seed)
    logger.info("Estimated g on %d dates from %d volume paths (seed=%d): g in [%.6g, %.6g]", grid.n, moments.n,
                seed, res.g.min(), res.g.max())
    return res


def save_g(g_est,                 # type: GEstimate
           file_path_or_stream    # type: PathOrStream
           ):
    # type: (...) -> None
    """Writes `g_est` as two columns `date g`, with a `# paths=<n> seed=<s>` header line."""
    with open_text(file_path_or_stream, mode='w') as f:
        f.write("# paths=%d seed=%s\n" % (g_est.paths, g_est.seed))
        for d, g in zip(g_est.dates, g_est.g):
            f.write("%.17g %.17g\n" % (d, g))


def load_g(file_path_or_stream,  # type: PathOrStream
           grid=None             # type: Optional[MonitoringGrid]
           ):
    # type: (...) -> GEstimate
    """
    Reads a two-column `date g` file as written by `save_g`. Standard errors are not stored and come back as NaN.
    When `grid` is given, the dates must match its dates.
    """
    table, comments = read_numeric_table(file_path_or_stream, ncols=2, name='g file')
    meta = dict()  # type: Dict[str, str]
    for line in comments:
        for field in line.split():
            if '=' in field:
                k, v = field.split('=', 1)
                meta[k] = v
    try:
        paths = int(meta.get('paths', 0))
        seed = meta.get('seed', 'None')
        seed = None if seed == 'None' else int(seed)
    except ValueError:
        raise DomainError("g file: invalid metadata %r" % meta)

    res = GEstimate(table[:, 0], table[:, 1], np.full(len(table), np.nan), paths, seed)
    if grid is not None:
        res.check_dates(grid)
    return res


def vwap_grid(grid,  # type: MonitoringGrid
              g      # type: GEstimate
              ):
    # type: (...) -> MonitoringGrid
    """The grid with payoff weights g_i w_i (renormalised) and unchanged indicator weights. g = 1 returns `grid`."""
    g.check_dates(grid)
    if np.all(g.g == 1.):
        return grid
    return with_payoff_weights(grid, g.g * grid.w)


def vwap_bounds(curve,                                # type: RateCurve
                sigma,                                # type: float
                S0,                                   # type: float
                K,                                    # type: float
                grid,                                 # type: MonitoringGrid
                g,                                    # type: GEstimate
                z_width=DEFAULT_Z_WIDTH,               # type: float
                a_bracket=DEFAULT_A_BRACKET,           # type: Sequence[float]
                hermite_nodes=DEFAULT_HERMITE_NODES,   # type: int
                opt_tol=DEFAULT_OPT_TOL                # type: float
                ):
    # type: (...) -> Tuple[BoundResult, BoundResult]
    """
    LB1 and UB1 for a call on the VWAP, assuming price and volume are independent so that g factors out of the
    Gaussian expectations.
    """
    if not S0 > 0:
        raise DomainError("Spot price S0 should be > 0, found %r" % S0)
    if not K > 0:
        raise DomainError("Strike K should be > 0, found %r" % K)
    model = build_model(curve, sigma, vwap_grid(grid, g))
    moneyness = K / S0
    lower = lb1(model, moneyness, S0, z_width=z_width, opt_tol=opt_tol)
    upper = ub1(model, moneyness, S0, a_bracket=a_bracket, hermite_nodes=hermite_nodes, opt_tol=opt_tol)
    logger.debug("VWAP bounds: %r, %r", lower, upper)
    return lower, upper

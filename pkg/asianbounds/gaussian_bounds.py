#  Authors: The asianbounds developers
#
#  License: 3-clause BSD, <LICENSE>
"""
Lower and upper bounds for Asian-type call prices when log-prices are Gaussian.

Log-returns follow X_u = R_u + sigma W_u - sigma^2 u / 2 with deterministic R_u, so every X_{u_i} and the average
Xbar = sum_j w_j X_{u_j} are jointly Gaussian with

    Cov(W_{u_i}, Wbar) = kappa_i = sum_j w_j min(u_i, u_j),        Var(Wbar) = V = sum_i w_i kappa_i.

On top of that model this module evaluates

 - LB1 = S0 sup_z E e^{-R_T} (sum_i p_i e^{X_i} - K/S0) 1{Xbar > z}   (closed form in z, maximised),
 - UB1 = S0 inf_a E e^{-R_T} sum_i p_i (e^{X_i} - K/S0 (1 + a X_i - a Xbar))^+   (conditioning on X_i),
 - LB2 = S0 E e^{-R_T} (sum_i p_i E(e^{X_i} | Xbar) - K/S0)^+   (conditioning on Xbar),

and the midpoint price estimate with its relative error bound (UB1/LB1 - 1) 50%.
"""
import logging
from typing import Any, Dict, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import brentq
from scipy.special import logsumexp
from yamlable import yaml_info

from asianbounds.base import DomainError, ModelConsistencyError, NumericalError, OrderingViolationError, \
    PricingObject
from asianbounds.config import DEFAULT_A_BRACKET, DEFAULT_HERMITE_NODES, DEFAULT_OPT_TOL, DEFAULT_Z_WIDTH
from asianbounds.curves import RateCurve
from asianbounds.grids import CONTINUOUS_APPROX, MonitoringGrid
from asianbounds.numerics import exp_linear_roots, maximize_scalar, minimize_scalar, norm_cdf, \
    positive_part_gaussian_mean, split_gaussian_expectation

logger = logging.getLogger(__name__)

CONDITIONAL_VARIANCE_TOL = 1e-12
ORDERING_SLACK = 1e-9


# ------------------------------------------- Covariances -------------------------------------------
def kappa_of(grid,  # type: MonitoringGrid
             u      # type: Any
             ):
    # type: (...) -> Any
    """
    kappa(u) = Cov(W_u, Wbar) for the indicator weights of `grid`, for 0 < u <= T.

    Discrete grids use sum_j w_j min(u, u_j); continuous-approx grids use the exact continuous-uniform limit
    u - u^2 / (2T).
    """
    arr = np.asarray(u, dtype=float)
    if np.any(~(arr > 0)) or np.any(arr > grid.T):
        raise DomainError("kappa is defined for dates in (0, T=%r], found %r" % (grid.T, u))
    if grid.mode == CONTINUOUS_APPROX:
        res = arr - arr ** 2 / (2 * grid.T)
    else:
        res = np.minimum.outer(np.atleast_1d(arr), grid.dates).dot(grid.w).reshape(arr.shape)
    return float(res) if res.ndim == 0 else res


def avg_variance(grid):
    # type: (MonitoringGrid) -> float
    """V = Var(Wbar) = sum_i sum_j w_i w_j min(u_i, u_j), or T/3 for continuous-approx grids."""
    if grid.mode == CONTINUOUS_APPROX:
        return grid.T / 3.
    return float(np.dot(grid.w, kappa_of(grid, grid.dates)))


# ------------------------------------------- Model -------------------------------------------
class GaussianAvgModel(object):
    """
    The joint Gaussian law of (X_{u_1}, ..., X_{u_N}, Xbar). Immutable; build it with `build_model`.

    Attributes: `grid`, `sigma`, `R` (R_{u_i}), `R_T`, `m` (means R_{u_i} - sigma^2 u_i / 2), `kappa`, `V`,
    `m_bar` (sum_i w_i m_i) and `cond_var` (Var(Xbar | X_{u_i}) = sigma^2 (V - kappa_i^2 / u_i), clamped at 0).
    """
    __slots__ = ('grid', 'sigma', 'R', 'R_T', 'm', 'kappa', 'V', 'm_bar', 'cond_var')

    def __init__(self, grid, sigma, R, R_T, m, kappa, V, m_bar, cond_var):
        for name, value in zip(self.__slots__, (grid, sigma, R, R_T, m, kappa, V, m_bar, cond_var)):
            if isinstance(value, np.ndarray):
                value.setflags(write=False)
            object.__setattr__(self, name, value)

    def __setattr__(self, key, value):
        raise AttributeError("GaussianAvgModel is immutable")

    @property
    def avg_sd(self):
        # type: (...) -> float
        """Standard deviation of Xbar, sigma sqrt(V)."""
        return self.sigma * np.sqrt(self.V)

    def __repr__(self):
        return "GaussianAvgModel(sigma=%r, n=%d, R_T=%r, V=%r, m_bar=%r)" % (self.sigma, self.grid.n, self.R_T,
                                                                           self.V, self.m_bar)


def build_model(curve,  # type: RateCurve
                sigma,  # type: float
                grid    # type: MonitoringGrid
                ):
    # type: (...) -> GaussianAvgModel
    """
    Builds the Gaussian model of the monitored log-prices under constant volatility `sigma` and the rate curve.
    """
    sigma = float(sigma)
    if not sigma >= 0:
        raise DomainError("Volatility sigma should be >= 0, found %r" % sigma)

    u = grid.dates
    R = np.asarray(curve.integrated_rate(u), dtype=float)
    R_T = float(curve.integrated_rate(grid.T))
    m = R - 0.5 * sigma ** 2 * u
    kappa = np.asarray(kappa_of(grid, u), dtype=float)
    V = avg_variance(grid)
    m_bar = float(np.dot(grid.w, m))

    residual = V - kappa ** 2 / u
    if np.any(residual < -CONDITIONAL_VARIANCE_TOL):
        i = int(np.argmin(residual))
        raise ModelConsistencyError("Negative conditional variance of the average given the price at u=%r: %r"
                                    % (u[i], residual[i]), abscissa=float(u[i]))
    if np.any(residual < 0):
        logger.debug("Clamped %d round-off negative conditional variances to 0", int(np.sum(residual < 0)))
    cond_var = sigma ** 2 * np.maximum(residual, 0.)

    return GaussianAvgModel(grid, sigma, R, R_T, m, kappa, V, m_bar, cond_var)


# ------------------------------------------- Results -------------------------------------------
@yaml_info(yaml_tag_ns='asianbounds')
class BoundResult(PricingObject):
    """
    A price bound. `argopt` is the optimal z for LB1, the optimal a for UB1, the exercise boundary y* for LB2 and None
    in degenerate cases.
    """

    def __init__(self,
                 name,              # type: str
                 value,             # type: float
                 argopt=None,       # type: Optional[float]
                 evaluations=0,     # type: int
                 converged=True     # type: bool
                 ):
        value = float(value)
        if not value >= 0:
            raise NumericalError("%s bound should be >= 0, found %r" % (name, value))
        self.name = name
        self.value = value
        self.argopt = None if argopt is None else float(argopt)
        self.evaluations = int(evaluations)
        self.converged = bool(converged)

    def __repr__(self):
        return "BoundResult(%s=%r, argopt=%r, evaluations=%d)" % (self.name, self.value, self.argopt,
                                                                  self.evaluations)


@yaml_info(yaml_tag_ns='asianbounds')
class BoundsReport(PricingObject):
    """All bounds for one request together with the midpoint estimate and its error bound in percent."""

    def __init__(self,
                 lb2,        # type: float
                 lb1,        # type: float
                 ub1,        # type: float
                 midpoint,   # type: float
                 error_pct,  # type: float
                 z_star,     # type: Optional[float]
                 a_star      # type: Optional[float]
                 ):
        self.lb2 = float(lb2)
        self.lb1 = float(lb1)
        self.ub1 = float(ub1)
        self.midpoint = float(midpoint)
        self.error_pct = float(error_pct)
        self.z_star = None if z_star is None else float(z_star)
        self.a_star = None if a_star is None else float(a_star)

    def as_row(self):
        # type: (...) -> Dict[str, Any]
        return dict(vars(self))


# ------------------------------------------- Bounds -------------------------------------------
def _check_prices(moneyness, S0):
    # type: (float, float) -> None
    if not moneyness > 0:
        raise DomainError("Moneyness K/S0 should be > 0, found %r. For K = 0 the price is `average_forward`."
                          % moneyness)
    if not S0 > 0:
        raise DomainError("Spot price S0 should be > 0, found %r" % S0)


def average_forward(model, S0=1.):
    # type: (GaussianAvgModel, float) -> float
    """e^{-R_T} S0 sum_i p_i e^{R_{u_i}}, the value of the payoff without strike (K = 0)."""
    return float(np.exp(-model.R_T) * S0 * np.dot(model.grid.p, np.exp(model.R)))


def deterministic_price(model,      # type: GaussianAvgModel
                        moneyness,  # type: float
                        S0=1.       # type: float
                        ):
    # type: (...) -> float
    """The price when the average is not random (sigma = 0): e^{-R_T} S0 (sum_i p_i e^{R_{u_i}} - K/S0)^+."""
    return float(np.exp(-model.R_T) * S0 * max(np.dot(model.grid.p, np.exp(model.R)) - moneyness, 0.))


def lb1_objective(model,      # type: GaussianAvgModel
                  moneyness,  # type: float
                  z,          # type: float
                  S0=1.       # type: float
                  ):
    # type: (...) -> float
    """
    S0 E e^{-R_T} (sum_i p_i e^{X_i} - c) 1{Xbar > z}, using E[e^{X_i} 1{Xbar > z}] = e^{R_i} Phi(d_i) with
    d_i = (m_bar + sigma^2 kappa_i - z) / (sigma sqrt(V)).
    """
    s = model.avg_sd
    sig2 = model.sigma ** 2
    d = (model.m_bar + sig2 * model.kappa - z) / s
    d0 = (model.m_bar - z) / s
    inner = np.dot(model.grid.p, np.exp(model.R) * norm_cdf(d)) - moneyness * norm_cdf(d0)
    return float(np.exp(-model.R_T) * S0 * inner)


def lb1(model,                   # type: GaussianAvgModel
        moneyness,               # type: float
        S0=1.,                   # type: float
        z_width=DEFAULT_Z_WIDTH,  # type: float
        opt_tol=DEFAULT_OPT_TOL   # type: float
        ):
    # type: (...) -> BoundResult
    """
    The lower bound LB1, maximised over z by golden-section search on y* +/- z_width sigma sqrt(V).

    The first order condition of the objective in z is E[sum_i p_i e^{X_i} | Xbar = z] = c, so its maximiser is the
    exercise boundary y* of `exercise_boundary`. The bracket is centred there rather than on m_bar, which misses the
    maximiser for deep in-the-money options, and y* itself is kept as a candidate.

    :param model: the Gaussian model
    :param moneyness: c = K / S0, > 0
    :param S0: spot price, > 0
    :param z_width: half-width of the search bracket, in standard deviations of Xbar
    :param opt_tol: tolerance on z
    :return: a BoundResult whose `argopt` is z*
    """
    _check_prices(moneyness, S0)
    s = model.avg_sd
    if s == 0:
        return BoundResult('LB1', deterministic_price(model, moneyness, S0))

    y_star, root_evals = exercise_boundary(model, moneyness)
    lo, hi = y_star - z_width * s, y_star + z_width * s
    res = maximize_scalar(lambda z: lb1_objective(model, moneyness, z, S0), lo, hi, tol=opt_tol)
    value, z_star = res.value, res.argopt
    at_root = lb1_objective(model, moneyness, y_star, S0)
    if at_root > value:
        value, z_star = at_root, y_star
    logger.debug("LB1 = %r at z* = %r on [%r, %r] (%d evaluations)", value, z_star, lo, hi,
                 res.evaluations + root_evals + 1)
    # z -> +inf gives 0, which the finite bracket can only approximate
    return BoundResult('LB1', max(value, 0.), z_star, res.evaluations + root_evals + 1, res.converged)


def ub1_objective(model,                              # type: GaussianAvgModel
                  moneyness,                          # type: float
                  a,                                  # type: float
                  S0=1.,                              # type: float
                  hermite_nodes=DEFAULT_HERMITE_NODES  # type: int
                  ):
    # type: (...) -> float
    """
    U(a) = S0 e^{-R_T} sum_i p_i E[(e^{X_i} - c (1 + a X_i - a Xbar))^+] for a fixed a.

    Each term conditions on X_i = x: Xbar | x is Gaussian with mean m_bar + (kappa_i / u_i)(x - m_i) and variance
    sigma^2 (V - kappa_i^2 / u_i), so the inner expectation is E[(b + beta Xbar)^+] with b = e^x - c (1 + a x) and
    beta = c a. Its mean e^x + alpha_i x + gamma_i vanishes at most twice, and the outer Gaussian integral over x is
    split at those points.
    """
    _check_prices(moneyness, S0)
    if model.sigma == 0:
        return deterministic_price(model, moneyness, S0)

    c = float(moneyness)
    a = float(a)
    u = model.grid.dates
    m = model.m
    sd_x = model.sigma * np.sqrt(u)
    slope = model.kappa / u
    sd_cond = np.sqrt(model.cond_var)

    alpha = c * a * (slope - 1.)
    gamma = -c + c * a * (model.m_bar - slope * m)
    left, right = exp_linear_roots(alpha, gamma)
    breaks = np.column_stack(((left - m) / sd_x, (right - m) / sd_x))

    def inner(x):
        b = np.exp(x) - c * (1. + a * x)
        cond_mean = model.m_bar + slope[:, None] * (x - m[:, None])
        return positive_part_gaussian_mean(b, c * a, cond_mean, sd_cond[:, None])

    terms = split_gaussian_expectation(inner, m, sd_x, breaks, n=hermite_nodes)
    return float(np.exp(-model.R_T) * S0 * np.dot(model.grid.p, terms))


def ub1(model,                               # type: GaussianAvgModel
        moneyness,                           # type: float
        S0=1.,                               # type: float
        a_bracket=DEFAULT_A_BRACKET,          # type: Sequence[float]
        hermite_nodes=DEFAULT_HERMITE_NODES,  # type: int
        opt_tol=DEFAULT_OPT_TOL               # type: float
        ):
    # type: (...) -> BoundResult
    """
    The upper bound UB1, minimising `ub1_objective` over a in `a_bracket` by golden-section search (U is convex in a).

    :return: a BoundResult whose `argopt` is a*
    """
    _check_prices(moneyness, S0)
    if model.sigma == 0:
        return BoundResult('UB1', deterministic_price(model, moneyness, S0))

    lo, hi = a_bracket
    res = minimize_scalar(lambda a: ub1_objective(model, moneyness, a, S0, hermite_nodes), lo, hi, tol=opt_tol)
    logger.debug("UB1 = %r at a* = %r on [%r, %r] (%d evaluations)", res.value, res.argopt, lo, hi,
                 res.evaluations)
    return BoundResult('UB1', res.value, res.argopt, res.evaluations, res.converged)


def _conditional_level(model):
    # type: (GaussianAvgModel) -> Tuple[np.ndarray, np.ndarray]
    """log E(e^{X_i} | Xbar = m_bar) and the slopes beta_i = kappa_i / V of E(X_i | Xbar = y) in y."""
    u = model.grid.dates
    beta = model.kappa / model.V
    log_level = model.m + 0.5 * model.sigma ** 2 * np.maximum(u - model.kappa ** 2 / model.V, 0.)
    return log_level, beta


def exercise_boundary(model,     # type: GaussianAvgModel
                      moneyness  # type: float
                      ):
    # type: (...) -> Tuple[float, int]
    """
    The root y* of g(y) = c where g(y) = sum_i p_i E(e^{X_i} | Xbar = y) is increasing. It is found by a bracketing
    root search on log g, the bracket being grown from m_bar +/- sigma sqrt(V) until it changes sign.

    :return: a tuple (y*, number of evaluations of log g)
    """
    _check_prices(moneyness, 1.)
    s = model.avg_sd
    if s == 0:
        raise DomainError("The exercise boundary is undefined when the average is deterministic")
    log_level, beta = _conditional_level(model)
    log_c = np.log(moneyness)
    evaluations = [0]

    def h(y):
        evaluations[0] += 1
        return logsumexp(log_level + beta * (y - model.m_bar), b=model.grid.p) - log_c

    lo, hi = model.m_bar - s, model.m_bar + s
    for _ in range(200):
        h_lo, h_hi = h(lo), h(hi)
        if h_lo < 0 < h_hi:
            break
        width = hi - lo
        if h_lo >= 0:
            lo -= width
        if h_hi <= 0:
            hi += width
    else:
        raise NumericalError("Could not bracket the root of the conditional mean (c=%r)" % moneyness)
    y_star = brentq(h, lo, hi, xtol=1e-14, rtol=4 * np.finfo(float).eps)
    return float(y_star), evaluations[0]


def lb2(model,      # type: GaussianAvgModel
        moneyness,  # type: float
        S0=1.       # type: float
        ):
    # type: (...) -> BoundResult
    """
    The conditioning lower bound LB2.

    With beta_i = kappa_i / V, E(e^{X_i} | Xbar = y) = exp(m_i + beta_i (y - m_bar) + sigma^2 (u_i - kappa_i^2/V) / 2)
    and g(y) = sum_i p_i E(e^{X_i} | Xbar = y) is increasing. The positive part is active exactly on {Y > y*} where
    g(y*) = c (see `exercise_boundary`). On that branch every term is a truncated lognormal moment, integrated in
    closed form.
    """
    _check_prices(moneyness, S0)
    s = model.avg_sd
    if s == 0:
        return BoundResult('LB2', deterministic_price(model, moneyness, S0))

    log_level, beta = _conditional_level(model)
    y_star, evaluations = exercise_boundary(model, moneyness)

    # E[exp(l_i + beta_i (Y - m_bar)) 1{Y > y*}] for Y ~ N(m_bar, s^2)
    tail = np.exp(log_level + 0.5 * (beta * s) ** 2) * norm_cdf((model.m_bar - y_star) / s + beta * s)
    inner = np.dot(model.grid.p, tail) - moneyness * norm_cdf((model.m_bar - y_star) / s)
    value = max(float(np.exp(-model.R_T) * S0 * inner), 0.)
    logger.debug("LB2 = %r with y* = %r (%d evaluations)", value, y_star, evaluations)
    return BoundResult('LB2', value, y_star, evaluations)


def midpoint_and_error(lb,  # type: BoundResult
                       ub   # type: BoundResult
                       ):
    # type: (...) -> Tuple[float, float]
    """
    The midpoint estimate (lb + ub) / 2 and the bound (ub / lb - 1) 50 on its relative error, in percent.
    """
    lo, hi = lb.value, ub.value
    if not lo > 0:
        raise DomainError("The relative error needs a positive lower bound, found %r" % lo)
    if hi < lo - ORDERING_SLACK * max(1., lo):
        raise OrderingViolationError("Upper bound %s=%r is below lower bound %s=%r" % (ub.name, hi, lb.name, lo))
    hi = max(hi, lo)
    return 0.5 * (lo + hi), (hi / lo - 1.) * 50.


def price_bounds(curve,                                # type: RateCurve
                 sigma,                                # type: float
                 S0,                                   # type: float
                 K,                                    # type: float
                 grid,                                 # type: MonitoringGrid
                 z_width=DEFAULT_Z_WIDTH,               # type: float
                 a_bracket=DEFAULT_A_BRACKET,           # type: Sequence[float]
                 hermite_nodes=DEFAULT_HERMITE_NODES,   # type: int
                 opt_tol=DEFAULT_OPT_TOL                # type: float
                 ):
    # type: (...) -> BoundsReport
    """
    Computes LB2, LB1, UB1, the midpoint and its error bound for a call with strike K on the grid average.
    The midpoint and error are NaN when LB1 is zero.
    """
    if not S0 > 0:
        raise DomainError("Spot price S0 should be > 0, found %r" % S0)
    if not K > 0:
        raise DomainError("Strike K should be > 0, found %r" % K)
    model = build_model(curve, sigma, grid)
    moneyness = K / S0

    lower2 = lb2(model, moneyness, S0)
    lower = lb1(model, moneyness, S0, z_width=z_width, opt_tol=opt_tol)
    upper = ub1(model, moneyness, S0, a_bracket=a_bracket, hermite_nodes=hermite_nodes, opt_tol=opt_tol)
    if lower.value > 0:
        midpoint, error_pct = midpoint_and_error(lower, upper)
    else:
        midpoint, error_pct = float('nan'), float('nan')
    return BoundsReport(lower2.value, lower.value, upper.value, midpoint, error_pct, lower.argopt, upper.argopt)

#  Authors: The asianbounds developers
#
#  License: 3-clause BSD, <LICENSE>
"""
Monitoring schemes. The averaging measure is represented as a finite grid of dates u_1 < ... < u_N in (0, T] with
two weight vectors:

 - `p`, the payoff weights, averaging the payoff terms,
 - `w`, the indicator weights, defining the average log-price inside the event {avg X > z}.

For plain Asian options p = w. VWAP grids carry the expected volume weights in p and keep w uniform.
"""
from typing import Any, Dict, Optional, Sequence

import numpy as np
from yamlable import yaml_info

from asianbounds.base import DomainError, PathOrStream, PricingObject, as_float_vector, \
    read_numeric_table
from asianbounds.numerics import legendre_rule

DISCRETE = 'discrete'
CONTINUOUS_APPROX = 'continuous-approx'
MODES = (DISCRETE, CONTINUOUS_APPROX)

WEIGHT_SUM_TOL = 1e-12


def _normalized(weights, name):
    # type: (np.ndarray, str) -> np.ndarray
    if np.any(weights < 0):
        raise DomainError("%s should be >= 0, found %r" % (name, weights))
    total = weights.sum()
    if not total > 0:
        raise DomainError("%s should not be all zero" % name)
    return weights / total


@yaml_info(yaml_tag_ns='asianbounds')
class MonitoringGrid(PricingObject):
    """
    An immutable monitoring grid. Constructors validate ordering, positivity and the weight sums.

    :param T: maturity in years
    :param dates: strictly increasing monitoring dates in (0, T]
    :param p: payoff weights, >= 0 and summing to 1
    :param w: indicator weights, >= 0 and summing to 1. Defaults to `p`.
    :param mode: 'discrete', or 'continuous-approx' for a quadrature discretisation of the continuous uniform
        average, in which case the Gaussian model uses the exact continuous-limit covariances at the dates.
    """

    def __init__(self,
                 T,               # type: float
                 dates,           # type: Sequence[float]
                 p,               # type: Sequence[float]
                 w=None,          # type: Optional[Sequence[float]]
                 mode=DISCRETE    # type: str
                 ):
        T = float(T)
        if not T > 0:
            raise DomainError("Maturity T should be > 0, found %r" % T)
        dates = as_float_vector(dates, 'dates')
        p = as_float_vector(p, 'p')
        w = p if w is None else as_float_vector(w, 'w')

        n = len(dates)
        if n == 0:
            raise DomainError("A monitoring grid needs at least one date")
        if len(p) != n or len(w) != n:
            raise DomainError("Weight vectors should have one entry per date (%d), found %d and %d"
                              % (n, len(p), len(w)))
        if dates[0] <= 0:
            raise DomainError("Monitoring dates should be > 0, found %r" % dates[0])
        if np.any(np.diff(dates) == 0):
            raise DomainError("Duplicate monitoring dates are not allowed: %r" % dates)
        if np.any(np.diff(dates) < 0):
            raise DomainError("Monitoring dates should be strictly increasing: %r" % dates)
        if dates[-1] > T:
            raise DomainError("Last monitoring date %r is after maturity %r" % (dates[-1], T))
        for name, vec in (('p', p), ('w', w)):
            if np.any(vec < 0):
                raise DomainError("Weights %s should be >= 0, found %r" % (name, vec))
            if abs(vec.sum() - 1.) > WEIGHT_SUM_TOL:
                raise DomainError("Weights %s should sum to 1, found %r" % (name, vec.sum()))
        if mode not in MODES:
            raise DomainError("Unknown grid mode %r, should be one of %r" % (mode, MODES))

        self.T = T
        self.dates = dates
        self.p = p
        self.w = w
        self.mode = mode

    @property
    def n(self):
        # type: (...) -> int
        return len(self.dates)

    @property
    def is_plain(self):
        # type: (...) -> bool
        """True when payoff and indicator weights coincide (plain Asian option)."""
        return self.p is self.w or np.array_equal(self.p, self.w)

    def __to_yaml_dict__(self):
        # type: (...) -> Dict[str, Any]
        return {'T': self.T, 'dates': self.dates.tolist(), 'p': self.p.tolist(), 'w': self.w.tolist(),
                'mode': self.mode}

    def __eq__(self, other):
        return isinstance(other, MonitoringGrid) and self.__to_yaml_dict__() == other.__to_yaml_dict__()

    def __repr__(self):
        return "MonitoringGrid(T=%r, n=%d, mode=%r, plain=%r)" % (self.T, self.n, self.mode, self.is_plain)


def uniform_discrete(T, N):
    # type: (float, int) -> MonitoringGrid
    """
    The uniform discrete measure on (0, T]: dates u_i = i T / N, i = 1..N, all weights 1/N.

    :param T: maturity in years, > 0
    :param N: number of monitoring dates, >= 1
    :return:
    """
    if int(N) != N or N < 1:
        raise DomainError("Number of dates N should be an integer >= 1, found %r" % N)
    if not T > 0:
        raise DomainError("Maturity T should be > 0, found %r" % T)
    N = int(N)
    dates = np.arange(1, N + 1) * float(T) / N
    dates[-1] = T
    weights = np.full(N, 1. / N)
    return MonitoringGrid(T, dates, weights, weights)


def continuous_uniform_approx(T, M=200):
    # type: (float, int) -> MonitoringGrid
    """
    Gauss-Legendre discretisation of the continuous uniform average on (0, T] with M nodes. Polynomials up to degree
    2M - 1 are integrated exactly against the uniform density.
    """
    if int(M) != M or M < 2:
        raise DomainError("Number of Legendre nodes M should be an integer >= 2, found %r" % M)
    if not T > 0:
        raise DomainError("Maturity T should be > 0, found %r" % T)
    rule = legendre_rule(int(M))
    dates = 0.5 * float(T) * (rule.nodes + 1.)
    weights = rule.weights / rule.weights.sum()
    return MonitoringGrid(T, dates, weights, weights, mode=CONTINUOUS_APPROX)


def with_payoff_weights(grid, p):
    # type: (MonitoringGrid, Sequence[float]) -> MonitoringGrid
    """
    Returns a copy of `grid` whose payoff weights are `p` renormalised to sum to 1. Indicator weights are unchanged.
    """
    p = np.array(p, dtype=float).reshape(-1)
    if len(p) != grid.n:
        raise DomainError("Payoff weights should have one entry per date (%d), found %d" % (grid.n, len(p)))
    return MonitoringGrid(grid.T, grid.dates, _normalized(p, 'payoff weights'), grid.w, mode=grid.mode)


def load_weighted_grid(file_path_or_stream,  # type: PathOrStream
                       T=None                 # type: Optional[float]
                       ):
    # type: (...) -> MonitoringGrid
    """
    Reads a custom discrete grid from rows "date weight" (e.g. realized volume weights). Weights are renormalised and
    used both as payoff and indicator weights. Maturity defaults to the last date.
    """
    table, _ = read_numeric_table(file_path_or_stream, ncols=2, name='grid file')
    weights = _normalized(table[:, 1], 'grid weights')
    maturity = table[-1, 0] if T is None else T
    return MonitoringGrid(maturity, table[:, 0], weights, weights)

#  Authors: The asianbounds developers
#
#  License: 3-clause BSD, <LICENSE>
"""
Special functions, Gaussian quadrature and derivative-free scalar optimization used by every bound.
"""
import logging
from functools import lru_cache
from math import sqrt
from typing import Any, Callable, Sequence, Tuple

import numpy as np
from numpy.polynomial.hermite_e import hermegauss
from numpy.polynomial.legendre import leggauss
from scipy.special import erfc
from yamlable import yaml_info

from asianbounds.base import DomainError, NumericalError, PricingObject

logger = logging.getLogger(__name__)

SQRT2 = sqrt(2.)
SQRT2PI = sqrt(2. * np.pi)

INV_PHI = (sqrt(5.) - 1.) / 2.        # 1/phi
INV_PHI_SQ = (3. - sqrt(5.)) / 2.     # 1/phi^2

GAUSSIAN_TRUNCATION = 12.
"""Standardised half-width of the real line kept by `split_gaussian_expectation`"""


# ------------------------------------------- Special functions -------------------------------------------
def norm_cdf(x):
    # type: (Any) -> Any
    """Standard normal distribution function, Phi(x) = erfc(-x / sqrt(2)) / 2. Saturates to 0/1 in the tails."""
    return 0.5 * erfc(-np.asarray(x, dtype=float) / SQRT2) if np.ndim(x) else 0.5 * float(erfc(-x / SQRT2))


def norm_pdf(x):
    # type: (Any) -> Any
    x = np.asarray(x, dtype=float) if np.ndim(x) else float(x)
    return np.exp(-0.5 * x * x) / SQRT2PI


def positive_part_gaussian_mean(b,     # type: Any
                                beta,  # type: Any
                                m,     # type: Any
                                s      # type: Any
                                ):
    # type: (...) -> Any
    """
    E[(b + beta Z)^+] for Z ~ N(m, s^2). Vectorised over broadcastable arguments.

    With sd = |beta| s and mu = b + beta m this is mu Phi(mu/sd) + sd phi(mu/sd), or max(mu, 0) when sd = 0.
    """
    if np.any(np.asarray(s) < 0):
        raise DomainError("standard deviation s should be >= 0, found %r" % (s,))
    scalar = not any(np.ndim(v) for v in (b, beta, m, s))
    b, beta, m, s = (np.atleast_1d(v) for v in np.broadcast_arrays(*(np.asarray(v, dtype=float)
                                                                   for v in (b, beta, m, s))))

    mu = b + beta * m
    sd = np.abs(beta) * s
    out = np.array(np.maximum(mu, 0.), dtype=float)
    pos = sd > 0
    if np.any(pos):
        t = mu[pos] / sd[pos]
        out[pos] = mu[pos] * norm_cdf(t) + sd[pos] * norm_pdf(t)
    return float(out[0]) if scalar else out


# ------------------------------------------- Quadrature -------------------------------------------
@yaml_info(yaml_tag_ns='asianbounds')
class QuadratureRule(PricingObject):
    """
    Nodes and positive weights of a Gaussian quadrature rule.

     - 'gauss-hermite': probabilists' normalisation, sum_k w_k f(x_k) ~ E[f(Z)] with Z standard normal.
     - 'gauss-legendre': sum_k w_k f(x_k) ~ int_{-1}^{1} f(x) dx.
    """

    def __init__(self,
                 nodes,   # type: Sequence[float]
                 weights,  # type: Sequence[float]
                 kind     # type: str
                 ):
        nodes = np.array(nodes, dtype=float)
        weights = np.array(weights, dtype=float)
        if kind not in ('gauss-hermite', 'gauss-legendre'):
            raise DomainError("Unknown quadrature kind %r" % kind)
        if nodes.shape != weights.shape or nodes.ndim != 1:
            raise DomainError("nodes and weights should be 1-D and of the same length")
        if np.any(np.diff(nodes) <= 0) or np.any(weights <= 0):
            raise DomainError("nodes should be strictly increasing and weights positive")
        nodes.setflags(write=False)
        weights.setflags(write=False)
        self.nodes = nodes
        self.weights = weights
        self.kind = kind

    def __len__(self):
        return len(self.nodes)


@lru_cache(maxsize=None)
def hermite_rule(n):
    # type: (int) -> QuadratureRule
    """Probabilists' Gauss-Hermite rule with n nodes: exact for x^k phi(x), k <= 2n - 1."""
    if n < 1:
        raise DomainError("Number of nodes should be >= 1, found %r" % n)
    nodes, weights = hermegauss(n)
    return QuadratureRule(nodes, weights / SQRT2PI, 'gauss-hermite')


@lru_cache(maxsize=None)
def legendre_rule(n):
    # type: (int) -> QuadratureRule
    """Gauss-Legendre rule on [-1, 1] with n nodes."""
    if n < 1:
        raise DomainError("Number of nodes should be >= 1, found %r" % n)
    nodes, weights = leggauss(n)
    return QuadratureRule(nodes, weights, 'gauss-legendre')


def _check_finite(values, abscissae, what):
    # type: (np.ndarray, np.ndarray, str) -> None
    bad = ~np.isfinite(values)
    if np.any(bad):
        at = np.broadcast_to(abscissae, values.shape)[bad].ravel()[0]
        raise NumericalError("%s is not finite at %r" % (what, at), abscissa=float(at))


def gauss_hermite_expectation(g,     # type: Callable[[np.ndarray], np.ndarray]
                              m,     # type: float
                              s,     # type: float
                              n=64   # type: int
                              ):
    # type: (...) -> float
    """
    E[g(m + s Z)] for Z standard normal, by the n-node probabilists' Gauss-Hermite rule. Exact for polynomial g of
    degree <= 2n - 1.

    :param g: a vectorised function, called once with the array of all abscissae
    :param m: mean
    :param s: standard deviation, >= 0
    :param n: number of nodes
    :return:
    """
    if s < 0:
        raise DomainError("standard deviation s should be >= 0, found %r" % s)
    rule = hermite_rule(int(n))
    x = m + s * rule.nodes
    values = np.asarray(g(x), dtype=float)
    _check_finite(values, x, "integrand")
    return float(np.dot(rule.weights, values))


def split_gaussian_expectation(g,       # type: Callable[[np.ndarray], np.ndarray]
                               m,       # type: Any
                               s,       # type: Any
                               breaks,  # type: Any
                               n=64     # type: int
                               ):
    # type: (...) -> np.ndarray
    """
    E[g(m_k + s_k Z)] for Z standard normal and k = 1..K, where g may have kinks at the standardised points `breaks`.

    The line is truncated to [-12, 12] standard deviations, split at the breakpoints falling inside, and each piece is
    integrated with an n-node Gauss-Legendre rule. When no row has a breakpoint the n-node Gauss-Hermite rule is used
    instead.

    :param g: vectorised integrand. It receives abscissae of shape (K, J), row k being drawn from N(m_k, s_k^2).
    :param m: means, length K
    :param s: standard deviations, length K
    :param breaks: standardised breakpoints, shape (K, B), padded with NaN
    :param n: number of nodes per piece
    :return: an array of K expectations
    """
    m = np.atleast_1d(np.asarray(m, dtype=float))
    s = np.atleast_1d(np.asarray(s, dtype=float))
    k = len(m)
    breaks = np.asarray(breaks, dtype=float).reshape(k, -1)

    if np.all(np.isnan(breaks)):
        rule = hermite_rule(int(n))
        x = m[:, None] + s[:, None] * rule.nodes
        values = np.asarray(g(x), dtype=float)
        _check_finite(values, x, "integrand")
        return values.dot(rule.weights)

    # piece edges: -L, sorted in-range breaks (NaN padding pushed to +L), +L
    edges = np.clip(np.where(np.isnan(breaks), GAUSSIAN_TRUNCATION, breaks), -GAUSSIAN_TRUNCATION,
                    GAUSSIAN_TRUNCATION)
    edges = np.sort(edges, axis=1)
    edges = np.concatenate([np.full((k, 1), -GAUSSIAN_TRUNCATION), edges, np.full((k, 1), GAUSSIAN_TRUNCATION)],
                           axis=1)
    lo, hi = edges[:, :-1], edges[:, 1:]                                # (K, P)
    half = 0.5 * (hi - lo)

    rule = legendre_rule(int(n))
    z = (0.5 * (hi + lo))[:, :, None] + half[:, :, None] * rule.nodes   # (K, P, n)
    wz = half[:, :, None] * rule.weights * norm_pdf(z)

    x = m[:, None, None] + s[:, None, None] * z
    values = np.asarray(g(x.reshape(k, -1)), dtype=float).reshape(z.shape)
    _check_finite(values, x, "integrand")
    return (wz * values).sum(axis=(1, 2))


# ------------------------------------------- Roots -------------------------------------------
def _exp_linear(x, a, g):
    return np.exp(x) + a * x + g


def _monotone_newton(x, a, g, max_iter=200):
    # type: (np.ndarray, np.ndarray, np.ndarray, int) -> np.ndarray
    """Newton iterations on e^x + a x + g from points where f > 0 on the side of the sought root."""
    eps = np.finfo(float).eps
    for _ in range(max_iter):
        fx = _exp_linear(x, a, g)
        # converged where the residual is at round-off level
        done = np.abs(fx) <= 8 * eps * (np.exp(x) + np.abs(a * x) + np.abs(g))
        step = np.where(done, 0., fx / (np.exp(x) + a))
        x = x - step
        if np.all(np.abs(step) <= 1e-15 * (1. + np.abs(x))):
            return x
    raise NumericalError("Newton iterations for e^x + a x + g = 0 did not converge", abscissa=x.tolist())


def exp_linear_roots(alpha,  # type: Any
                     gamma   # type: Any
                     ):
    # type: (...) -> Tuple[np.ndarray, np.ndarray]
    """
    Real roots of the convex function f(x) = e^x + alpha x + gamma, vectorised.

    Returns (left, right) arrays, NaN where the root does not exist. A single root is always reported as `right`
    (f increasing through it); `left` only exists when alpha < 0 and min f < 0 (f decreasing through it).
    Newton iterations started on the correct side of a convex function converge monotonically.
    """
    alpha, gamma = np.broadcast_arrays(np.atleast_1d(np.asarray(alpha, dtype=float)),
                                       np.atleast_1d(np.asarray(gamma, dtype=float)))
    left = np.full(alpha.shape, np.nan)
    right = np.full(alpha.shape, np.nan)

    neg = alpha < 0
    x_min = np.where(neg, np.log(np.where(neg, -alpha, 1.)), 0.)
    # infimum of f: attained at x_min when alpha < 0, gamma (approached at -inf) when alpha == 0
    f_min = np.where(neg, -alpha + alpha * x_min + gamma, np.where(alpha == 0, gamma, -np.inf))

    has_right = f_min < 0
    exact = has_right & (alpha == 0)
    right[exact] = np.log(-gamma[exact])

    todo = has_right & (alpha != 0)
    if np.any(todo):
        a, g = alpha[todo], gamma[todo]
        # right of the minimum, where f > 0
        x0 = np.maximum(x_min[todo], 0.) + np.log1p(np.abs(a) + np.abs(g)) + 1.
        for _ in range(200):
            low = _exp_linear(x0, a, g) <= 0
            if not np.any(low):
                break
            x0 = np.where(low, 2 * x0 + 1., x0)
        right[todo] = _monotone_newton(x0, a, g)

    has_left = neg & (f_min < 0)
    if np.any(has_left):
        a, g = alpha[has_left], gamma[has_left]
        # left of both the minimum and the root of the linear part, where f > 0
        x0 = np.minimum(x_min[has_left], -g / a) - 1.
        left[has_left] = _monotone_newton(x0, a, g)

    return left, right


# ------------------------------------------- Optimization -------------------------------------------
@yaml_info(yaml_tag_ns='asianbounds')
class OptResult(PricingObject):
    """Outcome of a scalar search: the optimizer, the optimal value, the number of evaluations and convergence."""

    def __init__(self,
                 argopt,       # type: float
                 value,        # type: float
                 evaluations,  # type: int
                 converged     # type: bool
                 ):
        self.argopt = float(argopt)
        self.value = float(value)
        self.evaluations = int(evaluations)
        self.converged = bool(converged)

    def __repr__(self):
        return "OptResult(argopt=%r, value=%r, evaluations=%d, converged=%r)" % (self.argopt, self.value,
                                                                                 self.evaluations, self.converged)


def _golden_section(f,            # type: Callable[[float], float]
                    lo,           # type: float
                    hi,           # type: float
                    tol,          # type: float
                    max_iter      # type: int
                    ):
    # type: (...) -> OptResult
    """Golden-section search for a maximum of f on [lo, hi]. The bracket ends are candidates too."""
    if not lo < hi:
        raise DomainError("Search bracket should satisfy lo < hi, found [%r, %r]" % (lo, hi))
    if not tol > 0:
        raise DomainError("Tolerance should be > 0, found %r" % tol)

    evaluations = [0]

    def feval(x):
        evaluations[0] += 1
        y = f(x)
        if not np.isfinite(y):
            raise NumericalError("objective is not finite at %r" % x, abscissa=x)
        return y

    a, b = float(lo), float(hi)
    f_lo, f_hi = feval(a), feval(b)
    c = a + INV_PHI_SQ * (b - a)
    d = a + INV_PHI * (b - a)
    fc, fd = feval(c), feval(d)

    iterations = 0
    while (b - a) > tol and iterations < max_iter:
        iterations += 1
        if fc >= fd:
            b, d, fd = d, c, fc
            c = a + INV_PHI_SQ * (b - a)
            fc = feval(c)
        else:
            a, c, fc = c, d, fd
            d = a + INV_PHI * (b - a)
            fd = feval(d)

    best_x, best_f = (c, fc) if fc >= fd else (d, fd)
    if f_lo > best_f:
        best_x, best_f = lo, f_lo
    if f_hi > best_f:
        best_x, best_f = hi, f_hi
    converged = (b - a) <= tol
    if not converged:
        logger.warning("golden-section search did not converge in %d iterations (bracket width %g)",
                       max_iter, b - a)
    return OptResult(best_x, best_f, evaluations[0], converged)


def maximize_scalar(f,              # type: Callable[[float], float]
                    lo,             # type: float
                    hi,             # type: float
                    tol=1e-8,       # type: float
                    max_iter=500    # type: int
                    ):
    # type: (...) -> OptResult
    """
    Maximizes f on [lo, hi] by golden-section search. For unimodal f the returned `argopt` is within `tol` of the
    maximizer. A NumericalError is raised as soon as f returns a non-finite value.
    """
    return _golden_section(f, lo, hi, tol, max_iter)


def minimize_scalar(f,              # type: Callable[[float], float]
                    lo,             # type: float
                    hi,             # type: float
                    tol=1e-8,       # type: float
                    max_iter=500    # type: int
                    ):
    # type: (...) -> OptResult
    """Minimizes f on [lo, hi] by golden-section search, see `maximize_scalar`."""
    res = _golden_section(lambda x: -f(x), lo, hi, tol, max_iter)
    res.value = -res.value
    return res

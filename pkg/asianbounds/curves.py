#  Authors: The asianbounds developers
#
#  License: 3-clause BSD, <LICENSE>
"""
Deterministic interest-rate term structures r_s, their integrals R_t = int_0^t r_s ds and discount factors e^{-R_t}.
Time is in years everywhere.
"""
from abc import abstractmethod
from typing import Any, Dict, Sequence, Union

import numpy as np
from yamlable import yaml_info

from asianbounds.base import DomainError, PathOrStream, PricingObject, as_float_vector, \
    read_numeric_table

TimeLike = Union[float, Sequence[float], np.ndarray]


def _check_times(t):
    # type: (TimeLike) -> np.ndarray
    arr = np.asarray(t, dtype=float)
    if np.any(np.isnan(arr)) or np.any(arr < 0):
        raise DomainError("time should be >= 0, found %r" % (t,))
    return arr


def _like(t, values):
    # type: (TimeLike, np.ndarray) -> Any
    """Returns a python float for scalar input, an array otherwise."""
    return float(values) if np.ndim(t) == 0 else values


class RateCurve(PricingObject):
    """
    Abstract deterministic short-rate curve. Immutable after construction.

    Implementors provide `rate` (r_t) and `_integral` (R_t for validated, non-negative times).
    """
    kind = None  # type: str

    @abstractmethod
    def rate(self, t):
        # type: (TimeLike) -> Any
        """Instantaneous short rate r_t, per year."""

    @abstractmethod
    def _integral(self, t):
        # type: (np.ndarray) -> np.ndarray
        pass

    def integrated_rate(self, t):
        # type: (TimeLike) -> Any
        """R_t = int_0^t r_s ds. Vectorised; raises a DomainError for negative times."""
        arr = _check_times(t)
        return _like(t, self._integral(arr))

    def discount_factor(self, t):
        # type: (TimeLike) -> Any
        """exp(-R_t)."""
        arr = _check_times(t)
        return _like(t, np.exp(-self._integral(arr)))

    def __eq__(self, other):
        return type(self) is type(other) and self.__to_yaml_dict__() == other.__to_yaml_dict__()

    def __repr__(self):
        return "%s(%s)" % (type(self).__name__, ", ".join("%s=%r" % kv for kv in self.__to_yaml_dict__().items()))


@yaml_info(yaml_tag_ns='asianbounds')
class ConstantCurve(RateCurve):
    """r_s = r0."""
    kind = 'constant'

    def __init__(self, r0):
        # type: (float) -> None
        self.r0 = float(r0)

    def rate(self, t):
        return _like(t, np.full(np.shape(t), self.r0))

    def _integral(self, t):
        return self.r0 * t


@yaml_info(yaml_tag_ns='asianbounds')
class SinusoidalCurve(RateCurve):
    """
    r_s = r0 (1 + amplitude/2 sin(2 pi s)), integrated analytically:

        R_t = r0 t + r0 (amplitude/2) (1 - cos(2 pi t)) / (2 pi)
    """
    kind = 'sinusoidal'

    def __init__(self,
                 r0,        # type: float
                 amplitude  # type: float
                 ):
        self.r0 = float(r0)
        self.amplitude = float(amplitude)

    def rate(self, t):
        t = np.asarray(t, dtype=float)
        return _like(t, self.r0 * (1. + 0.5 * self.amplitude * np.sin(2 * np.pi * t)))

    def _integral(self, t):
        return self.r0 * t + self.r0 * 0.5 * self.amplitude * (1. - np.cos(2 * np.pi * t)) / (2 * np.pi)


@yaml_info(yaml_tag_ns='asianbounds')
class TabulatedCurve(RateCurve):
    """
    Rates given at knots (times strictly increasing, first time >= 0). The rate is linear between knots and flat
    outside them, and R_t is the exact integral of that piecewise-linear rate.
    """
    kind = 'tabulated'

    def __init__(self,
                 times,  # type: Sequence[float]
                 rates   # type: Sequence[float]
                 ):
        times = as_float_vector(times, 'times')
        rates = as_float_vector(rates, 'rates')
        if len(times) != len(rates) or len(times) == 0:
            raise DomainError("times and rates should be non-empty and of the same length, found %d and %d"
                              % (len(times), len(rates)))
        if times[0] < 0 or np.any(np.diff(times) <= 0):
            raise DomainError("knot times should be >= 0 and strictly increasing, found %r" % times)
        self.times = times
        self.rates = rates

        # R at each knot: flat rate on [0, t_0], trapezoids after
        cum = np.empty_like(times)
        cum[0] = rates[0] * times[0]
        cum[1:] = cum[0] + np.cumsum(0.5 * (rates[1:] + rates[:-1]) * np.diff(times))
        self._knot_integrals = cum

    def __to_yaml_dict__(self):
        # type: (...) -> Dict[str, Any]
        return {'times': self.times.tolist(), 'rates': self.rates.tolist()}

    def rate(self, t):
        return _like(t, np.interp(t, self.times, self.rates))

    def _integral(self, t):
        times, rates, cum = self.times, self.rates, self._knot_integrals
        out = np.empty_like(t)

        before = t <= times[0]
        out[before] = rates[0] * t[before]

        after = t >= times[-1]
        out[after] = cum[-1] + rates[-1] * (t[after] - times[-1])

        inside = ~(before | after)
        if np.any(inside):
            ti = t[inside]
            k = np.searchsorted(times, ti, side='right') - 1
            dt = ti - times[k]
            slope = (rates[k + 1] - rates[k]) / (times[k + 1] - times[k])
            out[inside] = cum[k] + rates[k] * dt + 0.5 * slope * dt ** 2
        return out


def integrated_rate(curve, t):
    # type: (RateCurve, TimeLike) -> Any
    """R_t = int_0^t r_s ds for the given curve; DomainError for t < 0."""
    return curve.integrated_rate(t)


def discount_factor(curve, t):
    # type: (RateCurve, TimeLike) -> Any
    """exp(-R_t) for the given curve; DomainError for t < 0."""
    return curve.discount_factor(t)


def load_rate_curve(file_path_or_stream):
    # type: (PathOrStream) -> TabulatedCurve
    """
    Reads a tabulated curve from a two-column text file `time rate` (whitespace or comma separated, times in years,
    strictly increasing, annualized rates).

    :param file_path_or_stream:
    :return:
    """
    table, _ = read_numeric_table(file_path_or_stream, ncols=2, name='rate curve')
    return TabulatedCurve(times=table[:, 0], rates=table[:, 1])

#  Authors: The asianbounds developers
#
#  License: 3-clause BSD, <LICENSE>
"""
Price requests, as read by the command line.

A request file is either a YAML document tagged `!yamlable/asianbounds.PriceRequest`, or flat text with one
`key = value` per line:

    # Asian call, 10 monitoring dates
    S0 = 100
    K = 100
    sigma = 0.3
    curve = sinusoidal        # constant | sinusoidal | file
    curve.r0 = 0.09
    curve.amplitude = 1
    T = 1
    N = 10                    # or M = 200 (continuous average) or grid.file = weights.txt
    payoff = asian            # asian | vwap
    vwap.lam = 2              # vwap.* describes the volume model and the g source
    vwap.g_paths = 1000000    # or vwap.g_file = g.txt
    mc.paths = 1000000
    mc.seed = 42

Values are typed with the YAML scalar rules. Relative file names are resolved against the request file folder.
"""
import logging
import os
from typing import Any, Dict, Optional

import yaml
from yamlable import yaml_info

from asianbounds.base import DomainError, PathOrStream, PricingObject, RequestValidationError, open_text
from asianbounds.config import PricingConfig
from asianbounds.curves import ConstantCurve, RateCurve, SinusoidalCurve, load_rate_curve
from asianbounds.grids import MonitoringGrid, continuous_uniform_approx, load_weighted_grid, uniform_discrete
from asianbounds.vwap import DEFAULT_G_PATHS, GEstimate, VolumeModel, estimate_g, load_g

logger = logging.getLogger(__name__)

ASIAN = 'asian'
VWAP = 'vwap'
PAYOFFS = (ASIAN, VWAP)

YAML_SUFFIXES = ('.yaml', '.yml')

_TOP_KEYS = ('S0', 'K', 'sigma', 'T', 'N', 'M', 'grid.file', 'payoff', 'curve', 'curve.r0', 'curve.amplitude',
             'curve.file', 'mc.paths', 'mc.seed')
_VOLUME_KEYS = ('vwap.lam', 'vwap.theta', 'vwap.eta', 'vwap.x0')
_G_KEYS = ('vwap.g_paths', 'vwap.g_seed', 'vwap.g_file')


def _number(key, value, kind=float):
    # type: (str, Any, type) -> Any
    if isinstance(value, bool):
        raise RequestValidationError(key, "should be a number, found %r" % value)
    try:
        res = kind(value)
    except (TypeError, ValueError):
        raise RequestValidationError(key, "should be a number, found %r" % (value,))
    if kind is int and res != value:
        raise RequestValidationError(key, "should be an integer, found %r" % (value,))
    return res


@yaml_info(yaml_tag_ns='asianbounds')
class PriceRequest(PricingObject):
    """
    Everything needed to price one Asian or VWAP call: market data, the monitoring scheme, the payoff and the
    optional Monte Carlo settings. Exactly one of `N`, `M` and `grid_file` describes the grid.
    """

    def __init__(self,
                 S0,               # type: float
                 K,                # type: float
                 sigma,            # type: float
                 curve,            # type: RateCurve
                 T,                # type: float
                 N=None,           # type: Optional[int]
                 M=None,           # type: Optional[int]
                 grid_file=None,   # type: Optional[str]
                 payoff=ASIAN,     # type: str
                 volume=None,      # type: Optional[VolumeModel]
                 g_paths=None,     # type: Optional[int]
                 g_seed=0,         # type: int
                 g_file=None,      # type: Optional[str]
                 mc_paths=None,    # type: Optional[int]
                 mc_seed=0         # type: int
                 ):
        self.S0 = _number('S0', S0)
        if not self.S0 > 0:
            raise RequestValidationError('S0', "spot price should be > 0, found %r" % S0)
        self.K = _number('K', K)
        if not self.K > 0:
            raise RequestValidationError('K', "strike should be > 0, found %r" % K)
        self.sigma = _number('sigma', sigma)
        if not self.sigma >= 0:
            raise RequestValidationError('sigma', "volatility should be >= 0, found %r" % sigma)
        if not isinstance(curve, RateCurve):
            raise RequestValidationError('curve', "should be a rate curve, found %r" % (curve,))
        self.curve = curve
        self.T = _number('T', T)
        if not self.T > 0:
            raise RequestValidationError('T', "maturity should be > 0, found %r" % T)

        if sum(v is not None for v in (N, M, grid_file)) != 1:
            raise RequestValidationError('N', "exactly one of N, M and grid.file should be given")
        self.N = None if N is None else _number('N', N, int)
        self.M = None if M is None else _number('M', M, int)
        self.grid_file = grid_file

        if payoff not in PAYOFFS:
            raise RequestValidationError('payoff', "should be one of %r, found %r" % (PAYOFFS, payoff))
        self.payoff = payoff
        if payoff == VWAP:
            if volume is None:
                raise RequestValidationError('vwap', "a vwap payoff needs the volume model vwap.lam, vwap.theta, "
                                                     "vwap.eta and vwap.x0")
            if g_paths is not None and g_file is not None:
                raise RequestValidationError('vwap.g_file', "only one of vwap.g_paths and vwap.g_file can be given")
        self.volume = volume
        self.g_paths = None if g_paths is None else _number('vwap.g_paths', g_paths, int)
        self.g_seed = _number('vwap.g_seed', g_seed, int)
        self.g_file = g_file

        self.mc_paths = None if mc_paths is None else _number('mc.paths', mc_paths, int)
        if self.mc_paths is not None and self.mc_paths < 2:
            raise RequestValidationError('mc.paths', "should be >= 2, found %r" % mc_paths)
        self.mc_seed = _number('mc.seed', mc_seed, int)
        if not 0 <= self.mc_seed < 2 ** 64:
            raise RequestValidationError('mc.seed', "should be in [0, 2**64), found %r" % mc_seed)

    @property
    def moneyness(self):
        # type: (...) -> float
        return self.K / self.S0

    def with_base_dir(self, base_dir):
        # type: (str) -> PriceRequest
        """Returns a copy where relative grid and g file names are resolved against `base_dir`."""
        dct = dict(vars(self))
        for key in ('grid_file', 'g_file'):
            if dct[key] is not None and not os.path.isabs(dct[key]):
                dct[key] = os.path.join(base_dir, dct[key])
        return PriceRequest(**dct)

    def build_grid(self, continuous_nodes=None):
        # type: (Optional[int]) -> MonitoringGrid
        """
        The monitoring grid. `continuous_nodes` overrides the number of quadrature dates of a continuous average.
        """
        try:
            if self.N is not None:
                return uniform_discrete(self.T, self.N)
            elif self.M is not None:
                return continuous_uniform_approx(self.T, continuous_nodes or self.M)
            else:
                return load_weighted_grid(self.grid_file, self.T)
        except IOError as e:
            raise RequestValidationError('grid.file', str(e))
        except RequestValidationError:
            raise
        except DomainError as e:
            raise RequestValidationError('N' if self.N is not None else ('M' if self.M is not None else 'grid.file'),
                                         str(e))

    def build_g(self,
                grid,          # type: MonitoringGrid
                config=None    # type: Optional[PricingConfig]
                ):
        # type: (...) -> GEstimate
        """The g vector of a vwap request: loaded from `g_file`, or estimated by Monte Carlo."""
        config = config or PricingConfig()
        if self.g_file is not None:
            try:
                return load_g(self.g_file, grid)
            except IOError as e:
                raise RequestValidationError('vwap.g_file', str(e))
            except DomainError as e:
                raise RequestValidationError('vwap.g_file', str(e))
        paths = DEFAULT_G_PATHS if self.g_paths is None else self.g_paths
        return estimate_g(self.volume, grid, paths, self.g_seed, chunk_size=config.chunk_size,
                          workers=config.workers)

    def __repr__(self):
        return "PriceRequest(%s)" % ", ".join("%s=%r" % kv for kv in vars(self).items() if kv[1] is not None)


def _build_curve(values):
    # type: (Dict[str, Any]) -> RateCurve
    kind = values.pop('curve', 'constant')
    r0 = values.pop('curve.r0', None)
    amplitude = values.pop('curve.amplitude', None)
    curve_file = values.pop('curve.file', None)
    if kind == 'constant':
        if r0 is None:
            raise RequestValidationError('curve.r0', "a constant curve needs a rate")
        return ConstantCurve(_number('curve.r0', r0))
    elif kind == 'sinusoidal':
        if r0 is None or amplitude is None:
            raise RequestValidationError('curve.r0' if r0 is None else 'curve.amplitude',
                                         "a sinusoidal curve needs curve.r0 and curve.amplitude")
        return SinusoidalCurve(_number('curve.r0', r0), _number('curve.amplitude', amplitude))
    elif kind == 'file':
        if curve_file is None:
            raise RequestValidationError('curve.file', "a tabulated curve needs a file name")
        try:
            return load_rate_curve(str(curve_file))
        except (IOError, DomainError) as e:
            raise RequestValidationError('curve.file', str(e))
    else:
        raise RequestValidationError('curve', "should be one of constant, sinusoidal or file, found %r" % kind)


def parse_flat_request(file_path_or_stream,  # type: PathOrStream
                       base_dir=''           # type: str
                       ):
    # type: (...) -> PriceRequest
    """
    Parses a flat `key = value` request. `base_dir` is the folder against which relative file names are resolved.
    """
    values = dict()  # type: Dict[str, Any]
    with open_text(file_path_or_stream) as f:
        for lineno, line in enumerate(f, start=1):
            line = line.split('#', 1)[0].strip()
            if not line:
                continue
            if '=' not in line:
                raise RequestValidationError(line, "line %d should be of the form 'key = value'" % lineno)
            key, value = (s.strip() for s in line.split('=', 1))
            if key not in _TOP_KEYS + _VOLUME_KEYS + _G_KEYS:
                raise RequestValidationError(key, "unknown key (line %d)" % lineno)
            if key in values:
                raise RequestValidationError(key, "given twice (line %d)" % lineno)
            try:
                values[key] = yaml.safe_load(value)
            except yaml.YAMLError:
                values[key] = value

    for key in ('curve.file', 'grid.file', 'vwap.g_file'):
        if key in values and not os.path.isabs(str(values[key])):
            values[key] = os.path.join(base_dir, str(values[key]))

    curve = _build_curve(values)
    volume = None
    if any(k in values for k in _VOLUME_KEYS):
        missing = [k for k in _VOLUME_KEYS if k not in values]
        if missing:
            raise RequestValidationError(missing[0], "the volume model is incomplete")
        try:
            volume = VolumeModel(*(values.pop(k) for k in _VOLUME_KEYS))
        except (TypeError, ValueError) as e:
            raise RequestValidationError('vwap', str(e))

    for key in ('S0', 'K', 'sigma', 'T'):
        if key not in values:
            raise RequestValidationError(key, "missing")

    return PriceRequest(S0=values['S0'], K=values['K'], sigma=values['sigma'], curve=curve, T=values['T'],
                        N=values.get('N'), M=values.get('M'), grid_file=values.get('grid.file'),
                        payoff=values.get('payoff', ASIAN), volume=volume,
                        g_paths=values.get('vwap.g_paths'), g_seed=values.get('vwap.g_seed', 0),
                        g_file=values.get('vwap.g_file'),
                        mc_paths=values.get('mc.paths'), mc_seed=values.get('mc.seed', 0))


def load_request(file_path):
    # type: (str) -> PriceRequest
    """Reads a request file, YAML when its name ends with .yaml or .yml and flat `key = value` text otherwise."""
    base_dir = os.path.dirname(os.path.abspath(file_path))
    if file_path.lower().endswith(YAML_SUFFIXES):
        try:
            req = PriceRequest.load_yaml(file_path)
        except (TypeError, yaml.YAMLError) as e:
            raise RequestValidationError('<yaml>', str(e))
        req = req.with_base_dir(base_dir)
    else:
        req = parse_flat_request(file_path, base_dir)
    logger.debug("Loaded %r", req)
    return req


#  Authors: The asianbounds developers
#
#  License: 3-clause BSD, <LICENSE>
"""
The `asianbounds` command line. Results are written to standard output as CSV (or YAML with `--format yaml`),
diagnostics and logs to standard error. Exit codes: 0 ok, 2 invalid input, 3 numerical failure.
"""
import argparse
import logging
import os
import sys
from typing import Any, Iterable, List, Optional, Sequence

import yaml

from asianbounds.base import DomainError, NumericalError, OrderingViolationError, PricingObject, \
    RequestValidationError
from asianbounds.config import PricingConfig
from asianbounds.curves import ConstantCurve, SinusoidalCurve
from asianbounds.gaussian_bounds import BoundsReport, price_bounds
from asianbounds.grids import continuous_uniform_approx
from asianbounds.mc_oracle import McEstimate, mc_asian_price, mc_vwap_price
from asianbounds.requests import ASIAN, VWAP, PriceRequest, load_request
from asianbounds.vwap import DEFAULT_G_PATHS, REFERENCE_VOLUME_MODEL, estimate_g, vwap_bounds, vwap_grid

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_NUMERICAL = 3

NUMBER_FORMAT = '%.6g'

BOUNDS_COLUMNS = ('LB2', 'LB1', 'UB1', 'midpoint', 'error_pct', 'z_star', 'a_star')
MC_COLUMNS = ('mean', 'stderr', 'paths', 'seed')
TABLE1_COLUMNS = ('T', 'N', 'c', 'LB1', 'UB1', 'error_pct')
TABLE2_COLUMNS = ('sigma', 'LB1', 'MC', 'MC_stderr', 'UB1')

# Asian calls under the sinusoidal curve 0.09 (1 + c/2 sin(2 pi s)), None is the continuous average
TABLE1_MATURITIES = (1., 9.)
TABLE1_DATES = (10, 50, None)
TABLE1_AMPLITUDES = (0., 1.)
TABLE1_MARKET = dict(S0=100., K=100., sigma=0.3, r0=0.09)

# VWAP calls on the continuous average
TABLE2_SIGMAS = (0.1, 0.5, 0.8)
TABLE2_MARKET = dict(S0=110., K=100., T=1., r0=0.1)
DEFAULT_MC_PATHS = 10 ** 7

_log_handler = None  # type: Optional[logging.Handler]


def _configure_logging(level):
    # type: (str) -> None
    """Sends the package logs to the current standard error, replacing the handler of a previous invocation."""
    global _log_handler
    pkg_logger = logging.getLogger('asianbounds')
    if _log_handler is not None:
        pkg_logger.removeHandler(_log_handler)
    _log_handler = logging.StreamHandler(sys.stderr)
    _log_handler.setFormatter(logging.Formatter("%(levelname)s %(name)s: %(message)s"))
    pkg_logger.addHandler(_log_handler)
    pkg_logger.setLevel(level)


# ------------------------------------------- Argument types -------------------------------------------
def _int_at_least(minimum, maximum=None):
    def _parse(text):
        try:
            value = int(text)
        except ValueError:
            raise argparse.ArgumentTypeError("%r is not an integer" % text)
        if value < minimum or (maximum is not None and value > maximum):
            raise argparse.ArgumentTypeError("%d is not in the range [%d, %s]" % (value, minimum, maximum or 'inf'))
        return value
    return _parse


def _existing_file(text):
    # type: (str) -> str
    if not os.path.isfile(text):
        raise argparse.ArgumentTypeError("file %r does not exist" % text)
    return text


# ------------------------------------------- Output -------------------------------------------
def _fmt(value):
    # type: (Any) -> str
    if value is None:
        return ''
    elif isinstance(value, str):
        return value
    elif isinstance(value, int) and not isinstance(value, bool):
        return str(value)
    return NUMBER_FORMAT % value


def _emit(args,     # type: argparse.Namespace
          columns,  # type: Sequence[str]
          rows      # type: Iterable[Sequence[Any]]
          ):
    # type: (...) -> None
    """Writes a header and the rows as CSV, or the rows as a YAML list of mappings."""
    rows = list(rows)
    out = sys.stdout
    if args.format == 'yaml':
        out.write(yaml.safe_dump([dict(zip(columns, r)) for r in rows], sort_keys=False))
    else:
        out.write(",".join(columns) + "\n")
        for r in rows:
            out.write(",".join(_fmt(v) for v in r) + "\n")


def _emit_object(args,     # type: argparse.Namespace
                 obj,      # type: PricingObject
                 columns,  # type: Sequence[str]
                 row       # type: Sequence[Any]
                 ):
    # type: (...) -> None
    if args.format == 'yaml':
        sys.stdout.write(obj.dumps_yaml())
    else:
        _emit(args, columns, [row])


# ------------------------------------------- Pricing -------------------------------------------
def load_config(args):
    # type: (argparse.Namespace) -> PricingConfig
    """The settings of this invocation: the `--config` file if any, overridden by the command-line flags."""
    if args.config is not None:
        try:
            config = PricingConfig.load_yaml(args.config)
        except (TypeError, yaml.YAMLError) as e:
            raise DomainError("Invalid config file %s: %s" % (args.config, e))
    else:
        config = PricingConfig()
    overrides = dict((k, v) for k, v in (('workers', args.workers), ('hermite_nodes', args.hermite_nodes),
                                         ('opt_tol', args.opt_tol)) if v is not None)
    return config.replace(**overrides)


def bounds_report(request,  # type: PriceRequest
                  config    # type: PricingConfig
                  ):
    # type: (...) -> BoundsReport
    """LB2, LB1, UB1, midpoint and error for a request. VWAP requests use the g-weighted grid."""
    grid = request.build_grid()
    if request.payoff == VWAP:
        grid = vwap_grid(grid, request.build_g(grid, config))
    return price_bounds(request.curve, request.sigma, request.S0, request.K, grid, z_width=config.z_width,
                        a_bracket=config.a_bracket, hermite_nodes=config.hermite_nodes, opt_tol=config.opt_tol)


def mc_estimate(request,  # type: PriceRequest
                config    # type: PricingConfig
                ):
    # type: (...) -> McEstimate
    if request.mc_paths is None:
        raise RequestValidationError('mc.paths', "the mc block is missing, Monte Carlo needs mc.paths")
    grid = request.build_grid()
    kwargs = dict(antithetic=config.antithetic, chunk_size=config.chunk_size, workers=config.workers)
    if request.payoff == ASIAN:
        return mc_asian_price(request.curve, request.sigma, request.S0, request.K, grid, request.mc_paths,
                              request.mc_seed, **kwargs)
    return mc_vwap_price(request.curve, request.sigma, request.S0, request.K, grid, request.volume,
                         request.mc_paths, request.mc_seed, **kwargs)


def table1_requests(continuous_nodes):
    # type: (int) -> List[PriceRequest]
    """The 12 Asian requests of the reference table, in output order."""
    res = []
    for T in TABLE1_MATURITIES:
        for N in TABLE1_DATES:
            for c in TABLE1_AMPLITUDES:
                m = TABLE1_MARKET
                res.append(PriceRequest(S0=m['S0'], K=m['K'], sigma=m['sigma'],
                                        curve=SinusoidalCurve(m['r0'], c), T=T, N=N,
                                        M=continuous_nodes if N is None else None))
    return res


# ------------------------------------------- Commands -------------------------------------------
def cmd_bounds(args, config):
    # type: (argparse.Namespace, PricingConfig) -> None
    report = bounds_report(load_request(args.request_file), config)
    _emit_object(args, report, BOUNDS_COLUMNS, [report.lb2, report.lb1, report.ub1, report.midpoint,
                                                report.error_pct, report.z_star, report.a_star])


def cmd_mc(args, config):
    # type: (argparse.Namespace, PricingConfig) -> None
    res = mc_estimate(load_request(args.request_file), config)
    _emit_object(args, res, MC_COLUMNS, [res.mean, res.stderr, res.paths, res.seed])


def cmd_table1(args, config):
    # type: (argparse.Namespace, PricingConfig) -> None
    rows = []
    for req in table1_requests(args.continuous_nodes or config.continuous_nodes):
        report = bounds_report(req, config)
        rows.append([req.T, 'inf' if req.N is None else req.N, req.curve.amplitude, report.lb1, report.ub1,
                     report.error_pct])
    _emit(args, TABLE1_COLUMNS, rows)


def cmd_table2(args, config):
    # type: (argparse.Namespace, PricingConfig) -> None
    m = TABLE2_MARKET
    curve = ConstantCurve(m['r0'])
    grid = continuous_uniform_approx(m['T'], args.continuous_nodes or config.continuous_nodes)
    g = estimate_g(REFERENCE_VOLUME_MODEL, grid, args.g_paths, args.seed, chunk_size=config.chunk_size,
                   workers=config.workers)
    mc_seed = (args.seed + 1) % 2 ** 64

    rows = []
    for sigma in TABLE2_SIGMAS:
        lower, upper = vwap_bounds(curve, sigma, m['S0'], m['K'], grid, g, z_width=config.z_width,
                                   a_bracket=config.a_bracket, hermite_nodes=config.hermite_nodes,
                                   opt_tol=config.opt_tol)
        price = mc_vwap_price(curve, sigma, m['S0'], m['K'], grid, REFERENCE_VOLUME_MODEL, args.mc_paths, mc_seed,
                              antithetic=config.antithetic, chunk_size=config.chunk_size, workers=config.workers)
        rows.append([sigma, lower.value, price.mean, price.stderr, upper.value])
    _emit(args, TABLE2_COLUMNS, rows)


def build_parser():
    # type: (...) -> argparse.ArgumentParser
    parser = argparse.ArgumentParser(prog='asianbounds',
                                     description="Bounds and Monte Carlo prices for Asian and VWAP call options "
                                                 "under geometric Brownian motion with a deterministic "
                                                 "interest-rate curve.")
    parser.add_argument('-w', '--workers', type=_int_at_least(1), default=None,
                        help="Monte Carlo threads (default: all cores). Never changes printed values.")
    parser.add_argument('--hermite-nodes', type=_int_at_least(1), default=None, help="Quadrature nodes per piece.")
    parser.add_argument('--opt-tol', type=float, default=None, help="Optimizer tolerance.")
    parser.add_argument('-c', '--config', type=_existing_file, default=None,
                        help="YAML PricingConfig file. Flags override it.")
    parser.add_argument('--log-level', choices=['DEBUG', 'INFO', 'WARNING', 'ERROR'], default='WARNING',
                        help="Level of the logs written to standard error (default: %(default)s).")
    parser.add_argument('-f', '--format', choices=['csv', 'yaml'], default='csv',
                        help="Output format (default: %(default)s).")
    commands = parser.add_subparsers(dest='command', metavar='COMMAND')
    commands.required = True

    p = commands.add_parser('bounds', help="LB2, LB1, UB1, the midpoint, its error bound in percent, z* and a* "
                                           "for a request file.")
    p.add_argument('request_file', type=_existing_file)
    p.set_defaults(func=cmd_bounds)

    p = commands.add_parser('mc', help="Monte Carlo price of a request file (mc.paths and mc.seed) with its "
                                       "standard error.")
    p.add_argument('request_file', type=_existing_file)
    p.set_defaults(func=cmd_mc)

    p = commands.add_parser('table1', help="The Asian call table: LB1, UB1 and the error bound for T in {1, 9}, "
                                           "N in {10, 50, inf}.")
    p.add_argument('--continuous-nodes', type=_int_at_least(2), default=None,
                   help="Quadrature dates standing for the continuous average.")
    p.set_defaults(func=cmd_table1)

    p = commands.add_parser('table2', help="The VWAP call table: LB1, Monte Carlo price with standard error and "
                                           "UB1 per volatility.")
    p.add_argument('--g-paths', type=_int_at_least(2), default=DEFAULT_G_PATHS,
                   help="Volume paths used to estimate g (default: %(default)s).")
    p.add_argument('--mc-paths', type=_int_at_least(2), default=DEFAULT_MC_PATHS,
                   help="Monte Carlo samples per volatility (default: %(default)s).")
    p.add_argument('--seed', type=_int_at_least(0, 2 ** 64 - 1), default=0,
                   help="Seed of the g estimate. The Monte Carlo prices use seed + 1 (default: %(default)s).")
    p.add_argument('--continuous-nodes', type=_int_at_least(2), default=None,
                   help="Quadrature dates standing for the continuous average.")
    p.set_defaults(func=cmd_table2)
    return parser


def main(argv=None):
    # type: (Optional[Sequence[str]]) -> int
    """Runs the command line on `argv` (default: `sys.argv[1:]`) and returns the exit code."""
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as e:
        # usage errors are reported by argparse itself, with its exit code 2
        return e.code

    _configure_logging(args.log_level)
    try:
        config = load_config(args)
        logger.debug("Using %r", config)
        args.func(args, config)
    except DomainError as e:
        sys.stderr.write("Error: %s\n" % e)
        return EXIT_VALIDATION
    except (NumericalError, OrderingViolationError) as e:
        sys.stderr.write("Numerical failure: %s\n" % e)
        return EXIT_NUMERICAL
    return EXIT_OK


if __name__ == '__main__':
    sys.exit(main())

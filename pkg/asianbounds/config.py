#  Authors: The asianbounds developers
#
#  License: 3-clause BSD, <LICENSE>
from typing import Any, Dict, Optional, Sequence

from yamlable import yaml_info

from asianbounds.base import DomainError, PricingObject

DEFAULT_HERMITE_NODES = 64
DEFAULT_OPT_TOL = 1e-8
DEFAULT_Z_WIDTH = 6.0
DEFAULT_A_BRACKET = (0.0, 1.5)
DEFAULT_CONTINUOUS_NODES = 200
DEFAULT_CHUNK_SIZE = 2 ** 16


@yaml_info(yaml_tag_ns='asianbounds')
class PricingConfig(PricingObject):
    """
    Tunable numerical settings shared by the bounds engine, the Monte Carlo oracle and the CLI.

    Can be loaded from a YAML document such as

        !yamlable/asianbounds.PricingConfig
        hermite_nodes: 128
        opt_tol: 1.0e-10

    Missing keys take the library defaults.
    """

    def __init__(self,
                 hermite_nodes=DEFAULT_HERMITE_NODES,        # type: int
                 opt_tol=DEFAULT_OPT_TOL,                    # type: float
                 z_width=DEFAULT_Z_WIDTH,                    # type: float
                 a_bracket=DEFAULT_A_BRACKET,                # type: Sequence[float]
                 continuous_nodes=DEFAULT_CONTINUOUS_NODES,  # type: int
                 chunk_size=DEFAULT_CHUNK_SIZE,              # type: int
                 antithetic=True,                            # type: bool
                 workers=None                                # type: Optional[int]
                 ):
        if int(hermite_nodes) < 1:
            raise DomainError("hermite_nodes should be >= 1, found %r" % hermite_nodes)
        if not float(opt_tol) > 0:
            raise DomainError("opt_tol should be > 0, found %r" % opt_tol)
        if not float(z_width) > 0:
            raise DomainError("z_width should be > 0, found %r" % z_width)
        a_lo, a_hi = (float(a) for a in a_bracket)
        if not a_lo < a_hi:
            raise DomainError("a_bracket should be an increasing pair, found %r" % (a_bracket,))
        if int(continuous_nodes) < 2:
            raise DomainError("continuous_nodes should be >= 2, found %r" % continuous_nodes)
        if int(chunk_size) < 1:
            raise DomainError("chunk_size should be >= 1, found %r" % chunk_size)
        if workers is not None and int(workers) < 1:
            raise DomainError("workers should be >= 1 or None, found %r" % workers)

        self.hermite_nodes = int(hermite_nodes)
        self.opt_tol = float(opt_tol)
        self.z_width = float(z_width)
        self.a_bracket = (a_lo, a_hi)
        self.continuous_nodes = int(continuous_nodes)
        self.chunk_size = int(chunk_size)
        self.antithetic = bool(antithetic)
        self.workers = None if workers is None else int(workers)

    def __repr__(self):
        return "PricingConfig(%s)" % ", ".join("%s=%r" % kv for kv in vars(self).items())

    def __eq__(self, other):
        return isinstance(other, PricingConfig) and vars(self) == vars(other)

    def replace(self, **changes):
        # type: (...) -> PricingConfig
        """Returns a copy with the given settings changed. `workers=None` means all cores, as in the constructor."""
        dct = dict(vars(self))  # type: Dict[str, Any]
        for k, v in changes.items():
            if k not in dct:
                raise DomainError("Unknown pricing setting %r" % k)
            dct[k] = v
        return PricingConfig(**dct)

#  Authors: The asianbounds developers
#
#  License: 3-clause BSD, <LICENSE>
"""
Common foundations: the exception hierarchy, the `PricingObject` base class that makes every domain type
loadable from / dumpable to YAML, and readers for the small numeric text tables used by curves, grids and g files.
"""
from contextlib import contextmanager
from io import IOBase, StringIO
from typing import Any, Dict, Iterable, Iterator, List, Tuple, Union

import numpy as np
from yamlable import YamlAble

PathOrStream = Union[str, IOBase, StringIO]


# ------------------------------------------- Errors -------------------------------------------
class AsianBoundsError(Exception):
    """Root of all errors raised by this package."""


class DomainError(AsianBoundsError, ValueError):
    """An argument lies outside the domain of the operation."""


class RequestValidationError(DomainError):
    """A price request could not be parsed or validated. `key` names the offending request key."""

    def __init__(self, key, msg):
        # type: (str, str) -> None
        super(RequestValidationError, self).__init__("Invalid request key %r: %s" % (key, msg))
        self.key = key


class NumericalError(AsianBoundsError, ArithmeticError):
    """A numerical evaluation failed. `abscissa` is the point where it happened, when known."""

    def __init__(self, msg, abscissa=None):
        # type: (str, Any) -> None
        super(NumericalError, self).__init__(msg)
        self.abscissa = abscissa


class ModelConsistencyError(NumericalError):
    """The Gaussian model violates one of its invariants beyond round-off tolerance."""


class DegenerateVolumeError(NumericalError):
    """A simulated volume path has a zero average so the volume weights are undefined."""


class OrderingViolationError(AsianBoundsError, AssertionError):
    """An upper bound was found below a lower bound. This always signals a bug upstream."""


# ------------------------------------------- YAML-able objects -------------------------------------------
def _plain(value):
    # type: (Any) -> Any
    """Converts numpy containers and scalars into plain python objects that the safe dumper understands."""
    if isinstance(value, np.ndarray):
        return value.tolist()
    elif isinstance(value, np.generic):
        return value.item()
    elif isinstance(value, (tuple, list)):
        return [_plain(v) for v in value]
    elif isinstance(value, dict):
        return dict((k, _plain(v)) for k, v in value.items())
    else:
        return value


class PricingObject(YamlAble):
    """
    Base class of all domain value types: a `YamlAble` whose instances are written with plain yaml types even when
    they hold numpy arrays or scalars.

    Subclasses declare their tag with `@yaml_info(yaml_tag_ns='asianbounds')` so that documents start with
    `!yamlable/asianbounds.<ClassName>`. Loading goes through `cls(**dct)` so constructors keep doing all the
    validation.
    """

    def __to_yaml_dict__(self):
        # type: (...) -> Dict[str, Any]
        return _plain(vars(self))


# ------------------------------------------- Text tables -------------------------------------------
@contextmanager
def open_text(file_path_or_stream,  # type: PathOrStream
              mode='r'              # type: str
              ):
    # type: (...) -> Iterator[Any]
    """Opens a file path in text mode, or passes a stream through (closing it on exit like the path case)."""
    if isinstance(file_path_or_stream, str):
        with open(file_path_or_stream, mode=mode + 't') as f:
            yield f
    else:
        with file_path_or_stream as f:  # type: ignore
            yield f


def read_numeric_table(file_path_or_stream,  # type: PathOrStream
                       ncols,                # type: int
                       name='table'          # type: str
                       ):
    # type: (...) -> Tuple[np.ndarray, List[str]]
    """
    Reads a text table of `ncols` numeric columns separated by whitespace and/or commas. Blank lines are skipped and
    lines starting with '#' are returned separately as comments (without the '#').

    :return: a tuple (array of shape (rows, ncols), list of comment lines)
    """
    rows = []  # type: List[List[float]]
    comments = []  # type: List[str]
    with open_text(file_path_or_stream) as f:
        for lineno, line in enumerate(f, start=1):
            line = line.strip()
            if not line:
                continue
            if line.startswith('#'):
                comments.append(line[1:].strip())
                continue
            fields = line.replace(',', ' ').split()
            if len(fields) != ncols:
                raise DomainError("%s line %d: expected %d columns, found %d: %r" % (name, lineno, ncols,
                                                                                     len(fields), line))
            try:
                rows.append([float(v) for v in fields])
            except ValueError:
                raise DomainError("%s line %d: non-numeric value in %r" % (name, lineno, line))

    if not rows:
        raise DomainError("%s is empty" % name)
    return np.array(rows, dtype=float), comments


def as_float_vector(values,   # type: Iterable[float]
                    name      # type: str
                    ):
    # type: (...) -> np.ndarray
    """Converts to a read-only 1-D float array, rejecting non-finite entries."""
    arr = np.array(values, dtype=float).reshape(-1)
    if not np.all(np.isfinite(arr)):
        raise DomainError("%s contains non-finite values: %r" % (name, arr))
    arr.setflags(write=False)
    return arr

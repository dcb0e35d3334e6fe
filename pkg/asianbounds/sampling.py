#  Authors: The asianbounds developers
#
#  License: 3-clause BSD, <LICENSE>
"""
Reproducible chunk-parallel Monte Carlo plumbing.

The path index space is cut into chunks of a fixed size. Chunk k of random stream s draws from a Philox generator
keyed by (seed, s, k), so a chunk always sees the same numbers whatever the number of workers. Chunk results are
streaming moments that are merged in chunk order, which makes every estimate bit-reproducible.
"""
import logging
import os
from concurrent.futures import ThreadPoolExecutor
from functools import reduce
from typing import Any, Callable, List, Optional

import numpy as np

from asianbounds.base import DomainError
from asianbounds.config import DEFAULT_CHUNK_SIZE

logger = logging.getLogger(__name__)

PRICE_STREAM = 0
VOLUME_STREAM = 1

MAX_SEED = 2 ** 64 - 1

# paths x dates simulated at once inside a chunk
BLOCK_CELLS = 2 ** 22


def check_seed(seed):
    # type: (Any) -> int
    if isinstance(seed, bool) or int(seed) != seed or not 0 <= seed <= MAX_SEED:
        raise DomainError("seed should be an integer in [0, 2**64), found %r" % (seed,))
    return int(seed)


def chunk_generator(seed,         # type: int
                    chunk_index,  # type: int
                    stream        # type: int
                    ):
    # type: (...) -> np.random.Generator
    """
    Returns the counter-based generator of chunk `chunk_index` in random stream `stream`. Generators of different
    (stream, chunk) pairs are statistically independent.
    """
    seed_seq = np.random.SeedSequence(check_seed(seed), spawn_key=(int(stream), int(chunk_index)))
    return np.random.Generator(np.random.Philox(seed_seq))


def block_sizes(n_paths,  # type: int
                n_dates   # type: int
                ):
    # type: (...) -> List[int]
    """Splits the paths of one chunk into blocks of at most BLOCK_CELLS simulated values."""
    block = max(1, BLOCK_CELLS // max(1, n_dates))
    sizes = [block] * (n_paths // block)
    if n_paths % block:
        sizes.append(n_paths % block)
    return sizes


class RunningMoments(object):
    """
    Count, mean and sum of squared deviations of a sample, scalar or one value per coordinate.

    Moments of a block are computed on data shifted by its first row, and blocks are combined with Chan's pairwise
    update. Constant samples therefore get a variance of exactly 0.
    """
    __slots__ = ('n', 'mean', 'm2')

    def __init__(self, n, mean, m2):
        self.n = n
        self.mean = mean
        self.m2 = m2

    @classmethod
    def from_samples(cls, samples):
        # type: (np.ndarray) -> RunningMoments
        samples = np.asarray(samples, dtype=float)
        shift = samples[0]
        d = samples - shift
        mean_d = d.mean(axis=0)
        m2 = ((d - mean_d) ** 2).sum(axis=0)
        return cls(len(samples), shift + mean_d, m2)

    def merge(self, other):
        # type: (RunningMoments) -> RunningMoments
        n = self.n + other.n
        delta = other.mean - self.mean
        mean = self.mean + delta * (other.n / float(n))
        m2 = self.m2 + other.m2 + delta ** 2 * (self.n * other.n / float(n))
        return RunningMoments(n, mean, m2)

    def stderr(self):
        # type: (...) -> Any
        """Standard error of the mean, sqrt(sample variance / n)."""
        if self.n < 2:
            raise DomainError("At least 2 samples are needed for a standard error, found %d" % self.n)
        return np.sqrt(self.m2 / (self.n - 1) / self.n)


def run_chunks(simulate_chunk,                # type: Callable[[int, int], RunningMoments]
               paths,                         # type: int
               chunk_size=DEFAULT_CHUNK_SIZE,  # type: int
               workers=None                   # type: Optional[int]
               ):
    # type: (...) -> RunningMoments
    """
    Runs `simulate_chunk(chunk_index, n_paths)` over all chunks and merges the results in chunk order.

    :param simulate_chunk: simulates `n_paths` paths of chunk `chunk_index` and returns their moments
    :param paths: total number of paths, >= 1
    :param chunk_size: paths per chunk
    :param workers: number of threads, None for all cores. Never changes the result.
    :return:
    """
    if int(paths) != paths or paths < 1:
        raise DomainError("Number of paths should be an integer >= 1, found %r" % paths)
    if int(chunk_size) < 1:
        raise DomainError("chunk_size should be >= 1, found %r" % chunk_size)
    paths, chunk_size = int(paths), int(chunk_size)

    sizes = [chunk_size] * (paths // chunk_size)
    if paths % chunk_size:
        sizes.append(paths % chunk_size)
    indices = list(range(len(sizes)))

    n_workers = min(workers or os.cpu_count() or 1, len(sizes))
    logger.debug("Simulating %d paths in %d chunks with %d workers", paths, len(sizes), n_workers)
    if n_workers <= 1:
        results = [simulate_chunk(k, n) for k, n in zip(indices, sizes)]
    else:
        with ThreadPoolExecutor(max_workers=n_workers) as executor:
            results = list(executor.map(simulate_chunk, indices, sizes))
    return reduce(RunningMoments.merge, results)

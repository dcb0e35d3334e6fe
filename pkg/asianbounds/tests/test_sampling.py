import numpy as np
import pytest

from asianbounds import DomainError
from asianbounds.sampling import PRICE_STREAM, VOLUME_STREAM, BLOCK_CELLS, RunningMoments, block_sizes, check_seed, \
    chunk_generator, run_chunks


def test_chunk_generator_is_reproducible():
    """ Tests that a (seed, stream, chunk) triplet always yields the same numbers """
    a = chunk_generator(42, 3, PRICE_STREAM).standard_normal(5)
    b = chunk_generator(42, 3, PRICE_STREAM).standard_normal(5)
    np.testing.assert_array_equal(a, b)

    assert not np.array_equal(a, chunk_generator(42, 4, PRICE_STREAM).standard_normal(5))
    assert not np.array_equal(a, chunk_generator(42, 3, VOLUME_STREAM).standard_normal(5))
    assert not np.array_equal(a, chunk_generator(43, 3, PRICE_STREAM).standard_normal(5))


@pytest.mark.parametrize("seed", [-1, 2 ** 64, 1.5, True, "a"], ids=['negative', 'too-large', 'float', 'bool', 'str'])
def test_check_seed(seed):
    """ Tests that seeds outside [0, 2**64) are rejected """
    with pytest.raises((DomainError, ValueError)):
        check_seed(seed)


def test_check_seed_bounds():
    """ Tests the valid seed range """
    assert check_seed(0) == 0
    assert check_seed(2 ** 64 - 1) == 2 ** 64 - 1
    assert check_seed(7.) == 7


def test_block_sizes():
    """ Tests the split of a chunk into bounded blocks """
    assert block_sizes(10, 5) == [10]
    per_block = BLOCK_CELLS // 1000
    sizes = block_sizes(2 * per_block + 3, 1000)
    assert sizes == [per_block, per_block, 3]
    assert block_sizes(3, 10 * BLOCK_CELLS) == [1, 1, 1]


def test_running_moments():
    """ Tests the moments of a sample and the standard error """
    x = np.array([1., 2., 3., 4., 10.])
    mom = RunningMoments.from_samples(x)
    assert mom.n == 5
    assert mom.mean == pytest.approx(x.mean(), rel=1e-15)
    assert mom.stderr() == pytest.approx(x.std(ddof=1) / np.sqrt(5), rel=1e-14)


def test_running_moments_constant():
    """ Tests that constant samples have exactly zero variance """
    mom = RunningMoments.from_samples(np.full(1000, 0.1))
    mom = mom.merge(RunningMoments.from_samples(np.full(7, 0.1)))
    assert mom.mean == 0.1
    assert mom.stderr() == 0.


def test_running_moments_merge():
    """ Tests that merging blocks gives the moments of the whole sample """
    rng = np.random.default_rng(0)
    x = rng.normal(3., 2., size=(1000, 2))
    whole = RunningMoments.from_samples(x)
    merged = RunningMoments.from_samples(x[:123]).merge(RunningMoments.from_samples(x[123:500])) \
        .merge(RunningMoments.from_samples(x[500:]))
    assert merged.n == 1000
    np.testing.assert_allclose(merged.mean, whole.mean, rtol=1e-13)
    np.testing.assert_allclose(merged.m2, whole.m2, rtol=1e-12)


def test_stderr_needs_two_samples():
    """ Tests that a single sample has no standard error """
    with pytest.raises(DomainError):
        RunningMoments.from_samples([1.]).stderr()


def _normal_chunk(k, n):
    return RunningMoments.from_samples(chunk_generator(5, k, PRICE_STREAM).standard_normal(n))


@pytest.mark.parametrize("workers", [1, 2, 8], ids=['serial', 'two', 'eight'])
def test_run_chunks_ignores_workers(workers):
    """ Tests that the merged result does not depend on the number of workers """
    ref = run_chunks(_normal_chunk, 10000, chunk_size=999, workers=1)
    res = run_chunks(_normal_chunk, 10000, chunk_size=999, workers=workers)
    assert res.n == 10000
    assert res.mean == ref.mean
    assert res.m2 == ref.m2


def test_run_chunks_sizes():
    """ Tests that chunks cover all paths with a last partial chunk """
    seen = []

    def record(k, n):
        seen.append((k, n))
        return RunningMoments.from_samples(np.arange(n, dtype=float))

    res = run_chunks(record, 25, chunk_size=10, workers=1)
    assert seen == [(0, 10), (1, 10), (2, 5)]
    assert res.n == 25

    with pytest.raises(DomainError):
        run_chunks(record, 0)
    with pytest.raises(DomainError):
        run_chunks(record, 10, chunk_size=0)

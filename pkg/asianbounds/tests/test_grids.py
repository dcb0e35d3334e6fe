from io import StringIO

import numpy as np
import pytest

from asianbounds import MonitoringGrid, DomainError, uniform_discrete, continuous_uniform_approx, \
    with_payoff_weights, load_weighted_grid
from asianbounds.grids import CONTINUOUS_APPROX, DISCRETE


def test_uniform_discrete():
    """ Tests the uniform discrete grids of the reference table """
    g = uniform_discrete(1., 10)
    np.testing.assert_allclose(g.dates, np.arange(1, 11) / 10., rtol=1e-15)
    assert g.dates[-1] == 1.
    np.testing.assert_array_equal(g.p, np.full(10, 0.1))
    assert g.is_plain and g.mode == DISCRETE and g.n == 10

    g = uniform_discrete(9., 50)
    assert g.dates[0] == pytest.approx(0.18)
    assert g.dates[-1] == 9.
    np.testing.assert_array_equal(g.w, np.full(50, 0.02))


def test_uniform_single_date():
    """ Tests that N = 1 monitors at maturity only """
    g = uniform_discrete(1., 1)
    np.testing.assert_array_equal(g.dates, [1.])
    np.testing.assert_array_equal(g.p, [1.])


def test_continuous_uniform_approx():
    """ Tests the quadrature grid of the continuous average """
    g = continuous_uniform_approx(2., 200)
    assert g.n == 200 and g.mode == CONTINUOUS_APPROX
    assert g.p.sum() == pytest.approx(1., abs=1e-12)
    assert 0. < g.dates[0] and g.dates[-1] < 2.
    # integrates polynomials exactly against the uniform density
    assert np.dot(g.p, g.dates ** 3) == pytest.approx(2. ** 3 / 4., rel=1e-12)


@pytest.mark.parametrize("kwargs, msg", [(dict(dates=[0.5, 0.5], p=[0.5, 0.5]), "Duplicate monitoring dates"),
                                         (dict(dates=[0.6, 0.5], p=[0.5, 0.5]), "strictly increasing"),
                                         (dict(dates=[0., 0.5], p=[0.5, 0.5]), "should be > 0"),
                                         (dict(dates=[0.5, 1.5], p=[0.5, 0.5]), "after maturity"),
                                         (dict(dates=[0.5, 1.], p=[0.5, 0.6]), "should sum to 1"),
                                         (dict(dates=[0.5, 1.], p=[1.5, -0.5]), "should be >= 0"),
                                         (dict(dates=[0.5, 1.], p=[1.]), "one entry per date"),
                                         (dict(dates=[], p=[]), "at least one date")],
                         ids=['duplicate', 'unsorted', 'zero', 'late', 'sum', 'negative', 'length', 'empty'])
def test_validation(kwargs, msg):
    """ Tests that invalid grids are rejected with an explicit message """
    with pytest.raises(DomainError) as err_info:
        MonitoringGrid(1., **kwargs)
    assert msg in str(err_info.value)


def test_weights_sum_tolerance():
    """ Tests that weight sums are checked within 1e-12 """
    MonitoringGrid(1., [0.5, 1.], [0.5, 0.5 + 1e-13])
    with pytest.raises(DomainError):
        MonitoringGrid(1., [0.5, 1.], [0.5, 0.5 + 1e-11])


def test_with_payoff_weights():
    """ Tests that payoff weights are renormalised and indicator weights kept """
    g = uniform_discrete(1., 4)
    v = with_payoff_weights(g, [1., 1., 2., 4.])
    np.testing.assert_allclose(v.p, [0.125, 0.125, 0.25, 0.5])
    np.testing.assert_array_equal(v.w, g.w)
    assert not v.is_plain

    with pytest.raises(DomainError):
        with_payoff_weights(g, [1., 1.])


def test_load_weighted_grid():
    """ Tests custom grids read from a date/weight file """
    g = load_weighted_grid(StringIO(u"# date weight\n0.25 1\n0.5 1\n1.0 2\n"))
    assert g.T == 1.
    np.testing.assert_allclose(g.p, [0.25, 0.25, 0.5])
    assert g.is_plain

    g = load_weighted_grid(StringIO(u"0.25 1\n0.5 1\n"), T=2.)
    assert g.T == 2.


def test_yaml():
    """ Tests that grids survive a yaml dump and load """
    g = with_payoff_weights(uniform_discrete(1., 3), [1., 2., 3.])
    assert MonitoringGrid.loads_yaml(g.dumps_yaml()) == g


def test_payoff_weights_reference():
    """ Tests the renormalisation of a two-date payoff vector and the all-zero case """
    g = uniform_discrete(1., 2)
    v = with_payoff_weights(g, [2., 0.])
    np.testing.assert_array_equal(v.p, [1., 0.])
    np.testing.assert_array_equal(v.w, [0.5, 0.5])

    with pytest.raises(DomainError):
        with_payoff_weights(g, [0., 0.])

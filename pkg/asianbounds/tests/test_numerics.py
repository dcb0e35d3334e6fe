import numpy as np
import pytest
from scipy.stats import norm

from asianbounds import norm_cdf, norm_pdf, positive_part_gaussian_mean, gauss_hermite_expectation, \
    split_gaussian_expectation, maximize_scalar, minimize_scalar, DomainError, NumericalError
from asianbounds.numerics import exp_linear_roots, hermite_rule, legendre_rule
from asianbounds.tests._oracles import gaussian_expectation_quad, positive_part_quad


def test_norm_cdf():
    """ Tests the erfc-based normal distribution function to an absolute 1e-14, including the far tails """
    x = np.linspace(-30., 8., 200)
    np.testing.assert_allclose(norm_cdf(x), norm.cdf(x), rtol=0, atol=1e-14)
    assert norm_cdf(0.) == 0.5
    assert isinstance(norm_cdf(1.), float)
    assert norm_pdf(0.) == pytest.approx(1. / np.sqrt(2 * np.pi))


@pytest.mark.parametrize("b, beta, m, s", [(-1., 2., 0.3, 0.5), (0.5, -1., 0.2, 1.), (-3., 0.1, 1., 2.)],
                         ids=['pos-slope', 'neg-slope', 'deep-otm'])
def test_positive_part_gaussian_mean(b, beta, m, s):
    """ Tests E[(b + beta Z)^+] against adaptive quadrature """
    expected = gaussian_expectation_quad(lambda y: max(b + beta * y, 0.), m, s)
    assert positive_part_gaussian_mean(b, beta, m, s) == pytest.approx(expected, rel=1e-9, abs=1e-14)


def test_positive_part_degenerate():
    """ Tests the zero-variance limit and the domain check """
    assert positive_part_gaussian_mean(-1., 2., 0.75, 0.) == 0.5
    assert positive_part_gaussian_mean(-1., 0., 5., 3.) == 0.
    res = positive_part_gaussian_mean(np.array([-1., 1.]), 1., 0., 0.)
    np.testing.assert_array_equal(res, [0., 1.])

    with pytest.raises(DomainError):
        positive_part_gaussian_mean(0., 1., 0., -1.)


def test_positive_part_scalar_inputs():
    """ Tests that four scalars, or 0-d arrays, give back a python float """
    res = positive_part_gaussian_mean(0., 1., 0., 1.)
    assert isinstance(res, float)
    res = positive_part_gaussian_mean(np.float64(-1.), np.array(2.), 0.3, np.array(0.5))
    assert isinstance(res, float)
    assert res == pytest.approx(gaussian_expectation_quad(lambda y: max(-1. + 2. * y, 0.), 0.3, 0.5), rel=1e-9)

    res = positive_part_gaussian_mean(np.zeros((2, 1)), 1., np.array([0., 1.]), 1.)
    assert res.shape == (2, 2)
    np.testing.assert_allclose(res[:, 1], positive_part_gaussian_mean(1., 1., 0., 1.), rtol=1e-14)


def test_hermite_moments():
    """ Tests that the n-node rule integrates polynomials up to degree 2n - 1 exactly """
    rule = hermite_rule(3)
    assert len(rule) == 3
    assert rule.weights.sum() == pytest.approx(1., abs=1e-15)
    # E Z^4 = 3, E Z^5 = 0
    assert np.dot(rule.weights, rule.nodes ** 4) == pytest.approx(3., abs=1e-13)
    assert np.dot(rule.weights, rule.nodes ** 5) == pytest.approx(0., abs=1e-13)
    assert hermite_rule(3) is rule


def test_gauss_hermite_expectation():
    """ Tests the lognormal mean E e^{m + sZ} = e^{m + s^2/2} """
    assert gauss_hermite_expectation(np.exp, 0.1, 0.3) == pytest.approx(np.exp(0.1 + 0.045), rel=1e-14)
    assert gauss_hermite_expectation(np.exp, 0.1, 0.) == pytest.approx(np.exp(0.1), rel=1e-14)

    with pytest.raises(NumericalError) as err_info:
        gauss_hermite_expectation(lambda x: np.where(x > 0, np.inf, 0.), 0., 1., n=4)
    assert err_info.value.abscissa > 0


def test_split_gaussian_expectation():
    """ Tests kinked integrands split at their kinks against the closed-form call price """
    m = np.array([0.0, -0.2])
    s = np.array([0.3, 0.5])
    strike = np.array([1.0, 0.9])
    breaks = np.log(strike)[:, None] - m[:, None]
    breaks = np.column_stack([breaks[:, 0] / s, np.full(2, np.nan)])

    res = split_gaussian_expectation(lambda x: np.maximum(np.exp(x) - strike[:, None], 0.), m, s, breaks)
    d1 = (m - np.log(strike)) / s + s
    expected = np.exp(m + 0.5 * s ** 2) * norm.cdf(d1) - strike * norm.cdf(d1 - s)
    np.testing.assert_allclose(res, expected, rtol=1e-10)


def test_split_falls_back_to_hermite():
    """ Tests that without breakpoints the Gauss-Hermite rule is used """
    res = split_gaussian_expectation(np.exp, [0.1], [0.3], [[np.nan, np.nan]], n=16)
    assert res[0] == pytest.approx(gauss_hermite_expectation(np.exp, 0.1, 0.3, n=16), rel=1e-14)


def test_legendre_rule():
    """ Tests the Legendre rule on [-1, 1] """
    rule = legendre_rule(5)
    assert rule.weights.sum() == pytest.approx(2., abs=1e-14)
    assert np.dot(rule.weights, rule.nodes ** 8) == pytest.approx(2. / 9., abs=1e-14)


@pytest.mark.parametrize("alpha, gamma", [(0., -2.), (-3., 0.1), (-0.5, -1.), (2., -1.), (-1., 2.)],
                         ids=['alpha0', 'two-roots', 'two-roots-neg-gamma', 'one-root-pos', 'no-root'])
def test_exp_linear_roots(alpha, gamma):
    """ Tests the roots of e^x + alpha x + gamma """
    left, right = exp_linear_roots(alpha, gamma)
    f = lambda x: np.exp(x) + alpha * x + gamma  # noqa: E731
    xs = np.linspace(-60., 10., 200001)
    sign_changes = np.sum(np.diff(np.sign(f(xs))) != 0)
    n_roots = int(np.isfinite(left[0])) + int(np.isfinite(right[0]))
    assert n_roots == sign_changes
    for r in (left[0], right[0]):
        if np.isfinite(r):
            assert abs(f(r)) <= 1e-12 * (1. + abs(alpha * r) + abs(gamma))
    if np.isfinite(left[0]):
        assert left[0] < right[0]


def test_exp_linear_roots_vectorised():
    """ Tests that rows are solved independently """
    left, right = exp_linear_roots([0., -3., -1.], [-1., 0.1, 2.])
    assert right[0] == 0.
    assert np.isnan(left[0])
    assert np.isfinite(left[1]) and np.isfinite(right[1])
    assert np.isnan(left[2]) and np.isnan(right[2])


def test_golden_section():
    """ Tests maximization and minimization on unimodal functions """
    res = maximize_scalar(lambda x: -(x - 0.3) ** 2, -1., 2., tol=1e-10)
    assert res.argopt == pytest.approx(0.3, abs=1e-9)
    assert res.converged and res.evaluations > 10

    res = minimize_scalar(lambda a: (a - 0.8) ** 2 + 1., 0., 1.5, tol=1e-8)
    assert res.argopt == pytest.approx(0.8, abs=1e-7)
    assert res.value == pytest.approx(1., abs=1e-14)


def test_golden_section_ends():
    """ Tests that monotone objectives return the bracket end """
    res = maximize_scalar(lambda x: x, 0., 1.)
    assert res.argopt == 1.
    res = minimize_scalar(lambda x: x, 0., 1.)
    assert res.argopt == 0.


def test_golden_section_errors():
    """ Tests the bracket check and non-finite objectives """
    with pytest.raises(DomainError):
        maximize_scalar(lambda x: x, 1., 0.)
    with pytest.raises(NumericalError) as err_info:
        maximize_scalar(lambda x: np.nan if x > 0.5 else x, 0., 1.)
    assert err_info.value.abscissa > 0.5


def test_reference_values():
    """ Tests a few hand-checked values of the normal cdf and of the Gaussian positive part """
    assert norm_cdf(1.96) == pytest.approx(0.9750021, abs=1e-7)
    assert positive_part_gaussian_mean(0., 1., 0., 1.) == pytest.approx(1. / np.sqrt(2 * np.pi), rel=1e-14)
    assert positive_part_gaussian_mean(1., 1., 0., 1.) == pytest.approx(1.0833155, abs=1e-7)


def test_positive_part_random():
    """ Tests the Gaussian positive part on random parameters against quadrature split at the kink """
    rng = np.random.default_rng(20240917)
    for _ in range(300):
        b, beta, m = rng.uniform(-2., 2., size=3)
        s = rng.uniform(0.05, 2.)
        expected = positive_part_quad(b, beta, m, s)
        assert positive_part_gaussian_mean(b, beta, m, s) == pytest.approx(expected, rel=1e-10, abs=1e-12)


def test_hermite_reference_integrands():
    """ Tests E[1] = 1 and E[Z^2] = 1 with five nodes """
    assert gauss_hermite_expectation(np.ones_like, 0., 1., n=5) == pytest.approx(1., abs=1e-14)
    assert gauss_hermite_expectation(np.square, 0., 1., n=5) == pytest.approx(1., abs=1e-13)


def test_golden_section_reference():
    """ Tests the optimizer on sin and on the kinked |x| """
    res = maximize_scalar(np.sin, 0., 3., tol=1e-8)
    assert res.argopt == pytest.approx(np.pi / 2, abs=1e-7)
    assert res.value == pytest.approx(1., abs=1e-14)

    res = minimize_scalar(abs, -1., 2., tol=1e-9)
    assert res.argopt == pytest.approx(0., abs=1e-8)

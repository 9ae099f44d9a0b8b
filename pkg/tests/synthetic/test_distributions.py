import numpy as np
import pytest

from excess_correlation.model import FactorSpec
from excess_correlation.model.exceptions import InvalidFactorSpecError
from excess_correlation.synthetic import (
    bernoulli,
    centered_uniform,
    rademacher,
    sample_factors,
    signed_bernoulli,
)
from excess_correlation.synthetic.distributions import distribution_ppf


@pytest.mark.parametrize("p", [0.1, 0.3, 0.5, 0.8])
def test_signed_bernoulli_moments(p):
    """Skewness (1 - 2p) / sqrt(p (1 - p)) and excess kurtosis 1 / (p (1 - p)) - 6."""
    factors = FactorSpec.from_distributions([signed_bernoulli(p)])

    assert factors.mean == pytest.approx(2 * p - 1)
    assert factors.variances == pytest.approx(4 * p * (1 - p))
    assert factors.skewness == pytest.approx((1 - 2 * p) / np.sqrt(p * (1 - p)))
    assert factors.excess_kurtosis == pytest.approx(1 / (p * (1 - p)) - 6)


def test_rademacher_is_symmetric():
    factors = FactorSpec.from_distributions([rademacher()])

    assert factors.skewness == pytest.approx(0.0)
    assert factors.excess_kurtosis == pytest.approx(-2.0)


def test_centered_uniform_moments():
    factors = FactorSpec.from_distributions([centered_uniform()])

    assert factors.mean == pytest.approx(0.0)
    assert factors.variances == pytest.approx(1.0 / 3.0)
    assert factors.excess_kurtosis == pytest.approx(-1.2)


@pytest.mark.parametrize("make_distribution", [signed_bernoulli, bernoulli])
@pytest.mark.parametrize("p", [0.0, 1.0, -0.2, 1.5])
def test_invalid_probabilities_raise(make_distribution, p):
    with pytest.raises(InvalidFactorSpecError):
        make_distribution(p)


#########################
# Test distribution_ppf #
#########################

DISTRIBUTIONS = [bernoulli(0.2), signed_bernoulli(0.5), centered_uniform()]


def test_distribution_ppf_returns_one_column_per_factor():
    quantiles = np.array([[0.1, 0.1, 0.5], [0.9, 0.9, 1.0]])

    actual = distribution_ppf(quantiles, DISTRIBUTIONS)

    assert actual.shape == (2, 3)
    assert np.array_equal(actual, [[0.0, -1.0, 0.0], [1.0, 1.0, 1.0]])


def test_distribution_ppf_single_row():
    assert distribution_ppf([0.5, 0.5, 0.5], DISTRIBUTIONS).shape == (1, 3)


def test_distribution_ppf_rejects_column_mismatch():
    with pytest.raises(ValueError):
        distribution_ppf(np.full((4, 2), 0.5), DISTRIBUTIONS)


def test_sample_factors(rng):
    samples = sample_factors(DISTRIBUTIONS, 1_000, rng)

    assert samples.shape == (1_000, 3)
    assert set(np.unique(samples[:, 0])) <= {0.0, 1.0}
    assert set(np.unique(samples[:, 1])) <= {-1.0, 1.0}
    assert np.all(np.abs(samples[:, 2]) <= 1.0)

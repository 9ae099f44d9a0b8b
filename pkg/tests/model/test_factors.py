import numpy as np
import pytest
from scipy import stats

from excess_correlation.model import DirichletParams, FactorSpec
from excess_correlation.model.exceptions import (
    InvalidDirichletParamsError,
    InvalidFactorSpecError,
)

###################
# Test FactorSpec #
###################

INVALID_FACTOR_SPECS = [
    ([1.0, 2.0], [0.0], [3.0, 12.0]),
    ([1.0, 0.0], [0.0, 0.0], [3.0, 3.0]),
    ([1.0, -1.0], [0.0, 0.0], [3.0, 3.0]),
    ([2.0], [0.0], [3.0]),
]


@pytest.mark.parametrize("variances, third_moments, fourth_moments", INVALID_FACTOR_SPECS)
def test_factor_spec_rejects_invalid_moments(variances, third_moments, fourth_moments):
    with pytest.raises(InvalidFactorSpecError):
        FactorSpec(variances, third_moments, fourth_moments)


def test_factor_spec_rejects_mean_of_wrong_length():
    with pytest.raises(InvalidFactorSpecError):
        FactorSpec([1.0], [0.0], [3.0], mean=[0.0, 1.0])


def test_factor_spec_is_read_only():
    factors = FactorSpec([1.0, 2.0], [0.5, 0.0], [3.0, 12.0])

    with pytest.raises(ValueError):
        factors.variances[0] = 5.0


@pytest.mark.parametrize("p", [0.1, 0.25, 0.4])
def test_from_bernoulli_distribution(p):
    """Bernoulli(p) has variance p(1 - p) and third central moment p(1 - p)(1 - 2p)."""
    factors = FactorSpec.from_distributions([stats.bernoulli(p)])

    assert np.allclose(factors.variances, p * (1 - p))
    assert np.allclose(factors.third_moments, p * (1 - p) * (1 - 2 * p))
    assert np.allclose(factors.fourth_cumulants, p * (1 - p) * (1 - 6 * p * (1 - p)))
    assert np.allclose(factors.mean, p)


def test_from_distributions_standard_normal():
    factors = FactorSpec.from_distributions([stats.norm(), stats.norm(scale=2.0)])

    assert factors.k == 2
    assert np.allclose(factors.standard_deviations, [1.0, 2.0])
    assert np.allclose(factors.skewness, 0.0)
    assert np.allclose(factors.excess_kurtosis, 0.0)


########################
# Test DirichletParams #
########################


@pytest.mark.parametrize("alpha", [[], [1.0, 0.0], [1.0, -0.5], [np.inf, 1.0], [np.nan]])
def test_dirichlet_params_rejects_invalid_alpha(alpha):
    with pytest.raises(InvalidDirichletParamsError):
        DirichletParams(alpha)


def test_dirichlet_params_properties():
    params = DirichletParams([0.3, 0.7, 1.1, 0.9])

    assert params.k == 4
    assert params.alpha0 == pytest.approx(3.0)
    assert params.pmin == pytest.approx(0.1)
    assert np.allclose(params.mean, [0.1, 0.7 / 3, 1.1 / 3, 0.3])


def test_effective_factors_match_dirichlet_scales():
    """The effective factor skewness equals 2 sqrt(a0 (a0 + 1) / ((a0 + 2)^2 alpha_i))."""
    params = DirichletParams([0.5, 1.5, 2.0])
    factors = params.effective_factors()

    assert np.allclose(factors.standard_deviations, params.standard_deviations)
    assert np.allclose(factors.skewness, params.effective_skewness)

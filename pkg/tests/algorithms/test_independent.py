import numpy as np
import pytest

from excess_correlation.algorithms import eca_kurtosis, eca_skew, estimate_skewness
from excess_correlation.algorithms.diagonalization import whiten_moments
from excess_correlation.evaluation import align_columns
from excess_correlation.model import FactorSpec, RecoveryStatus, canonicalize
from excess_correlation.model.exceptions import DimensionMismatchError, MissingMomentsError
from excess_correlation.moments import exact_moments, lda_modified_moments
from excess_correlation.synthetic import centered_uniform, rademacher
from tests.instances import bernoulli_factors, gaussian_topics

#################
# Test eca_skew #
#################


def test_eca_skew_recovers_canonical_columns(rng):
    """Exact moments of skewed Bernoulli factors give every canonical column."""
    topics = gaussian_topics(12, 4, rng)
    _, factors = bernoulli_factors(4)

    result = eca_skew(exact_moments(topics, factors), 4, seed=0)
    report = align_columns(canonicalize(topics, factors), result.columns, allow_sign=True)

    assert result.status == RecoveryStatus.COMPLETE
    assert result.is_complete
    assert report.max_l2 <= 1e-8
    assert np.allclose(result.scale_estimates, 1.0)
    assert np.allclose(
        np.abs(result.skewness_estimates), factors.skewness[report.permutation], atol=1e-8
    )
    assert result.diagnostics["whitening_residual"] <= 1e-10


def test_eca_skew_recovers_random_instances():
    """Over many seeded instances nearly every run is complete, and every column is right."""
    _, factors = bernoulli_factors(4)
    n_complete = 0
    for seed in range(100):
        topics = gaussian_topics(12, 4, np.random.default_rng(seed), min_condition=0.1)

        result = eca_skew(exact_moments(topics, factors), 4, seed=seed)
        report = align_columns(canonicalize(topics, factors), result.columns, allow_sign=True)

        n_complete += result.is_complete
        if result.n_columns:
            assert report.max_l2 <= 1e-8, seed
    assert n_complete >= 95


# Relative separation of the first two singular values of the first contraction.
SEPARATIONS = [0.0, 1e-12, 1e-9, 1e-7, 1e-4, 1e-2]


@pytest.mark.parametrize("separation", SEPARATIONS)
@pytest.mark.parametrize("seed", range(4))
def test_eca_skew_never_returns_a_wrong_column(separation, seed):
    """Directions that tie or nearly tie two singular values give no spurious columns."""
    topics = gaussian_topics(12, 4, np.random.default_rng(100 + seed))
    _, factors = bernoulli_factors(4)
    moments = exact_moments(topics, factors)
    canonical = canonicalize(topics, factors)
    whitening = whiten_moments(moments.centered(), 4, np.random.default_rng(seed))
    whitened_columns = whitening.whitening.T @ canonical.entries
    skewness = np.array(
        [estimate_skewness(whitening, moments, vector) for vector in whitened_columns.T]
    )
    targets = np.array([1.0, 1.0 + separation, 2.0, 3.0])
    theta = whitened_columns @ (targets / skewness)

    result = eca_skew(moments, 4, theta=theta / np.linalg.norm(theta), seed=seed)
    report = align_columns(canonical, result.columns, allow_sign=True)

    assert result.n_columns >= 2
    assert report.max_l2 <= 1e-8


def test_eca_skew_finds_nothing_without_skew(rng):
    """Symmetric factors have no third cumulant, so no column is identifiable."""
    topics = gaussian_topics(12, 4, rng)
    factors = FactorSpec.from_distributions([rademacher()] * 4)

    result = eca_skew(exact_moments(topics, factors), 4, seed=0, retries=3)

    assert result.n_columns == 0
    assert result.status == RecoveryStatus.NOT_ALL_RECOVERED
    assert result.diagnostics["n_directions_tried"] == 3


def test_eca_skew_skips_tied_symmetric_factors(rng):
    """Two factors without skew tie at a zero singular value and are never returned."""
    topics = gaussian_topics(10, 3, rng)
    factors = FactorSpec(
        variances=[1.0, 1.0, 1.0], third_moments=[1.0, 0.0, 0.0], fourth_moments=[3.0] * 3
    )

    result = eca_skew(exact_moments(topics, factors), 3, seed=1)
    report = align_columns(canonicalize(topics, factors), result.columns, allow_sign=True)

    assert result.n_columns == 1
    assert report.permutation == [0]
    assert report.max_l2 <= 1e-8


def test_eca_skew_recovers_a_single_symmetric_factor(rng):
    """A lone zero singular value is isolated, and its vector is the remaining column."""
    topics = gaussian_topics(10, 3, rng)
    factors = FactorSpec(
        variances=[1.0, 1.0, 1.0], third_moments=[1.0, 0.0, 2.0], fourth_moments=[3.0] * 3
    )

    result = eca_skew(exact_moments(topics, factors), 3, seed=1)
    report = align_columns(canonicalize(topics, factors), result.columns, allow_sign=True)

    assert result.is_complete
    assert report.max_l2 <= 1e-8


def test_eca_skew_uses_given_theta(rng):
    topics = gaussian_topics(8, 3, rng)
    _, factors = bernoulli_factors(3)
    theta = np.array([0.6, 0.0, 0.8])

    result = eca_skew(exact_moments(topics, factors), 3, theta=theta, seed=0)

    assert np.array_equal(result.theta_used, theta)


def test_eca_skew_rejects_wrong_theta(rng):
    topics = gaussian_topics(8, 3, rng)
    _, factors = bernoulli_factors(3)

    with pytest.raises(DimensionMismatchError):
        eca_skew(exact_moments(topics, factors), 3, theta=np.ones(4), seed=0)


@pytest.mark.parametrize("k", [0, 9])
def test_eca_skew_rejects_invalid_k(rng, k):
    topics = gaussian_topics(8, 3, rng)
    _, factors = bernoulli_factors(3)

    with pytest.raises(DimensionMismatchError):
        eca_skew(exact_moments(topics, factors), k, seed=0)


def test_eca_skew_is_seeded(rng):
    topics = gaussian_topics(8, 3, rng)
    _, factors = bernoulli_factors(3)
    moments = exact_moments(topics, factors)

    first, second = eca_skew(moments, 3, seed=5), eca_skew(moments, 3, seed=5)

    assert np.array_equal(first.columns, second.columns)
    assert np.array_equal(first.theta_used, second.theta_used)


def test_estimate_skewness(rng):
    topics = gaussian_topics(8, 2, rng)
    _, factors = bernoulli_factors(2)
    moments = exact_moments(topics, factors)
    whitening = whiten_moments(moments, 2, rng)
    canonical = canonicalize(topics, factors).entries

    vector = whitening.whitening.T @ canonical[:, 0]

    assert abs(estimate_skewness(whitening, moments, vector)) == pytest.approx(
        factors.skewness[0], rel=1e-8
    )


#####################
# Test eca_kurtosis #
#####################

KURTOTIC_FACTORS = [
    [rademacher()] * 3,
    [centered_uniform()] * 3,
]


@pytest.mark.parametrize("distributions", KURTOTIC_FACTORS)
def test_eca_kurtosis_recovers_symmetric_factors(rng, distributions):
    topics = gaussian_topics(9, 3, rng)
    factors = FactorSpec.from_distributions(distributions)

    result = eca_kurtosis(exact_moments(topics, factors), 3, seed=0)
    report = align_columns(canonicalize(topics, factors), result.columns, allow_sign=True)

    assert result.is_complete
    assert report.max_l2 <= 1e-8
    assert np.allclose(result.kurtosis_estimates, factors.excess_kurtosis, atol=1e-8)
    assert np.allclose(result.skewness_estimates, 0.0, atol=1e-8)
    assert "theta2_used" in result.diagnostics


def test_eca_kurtosis_needs_fourth_order_moments(lda_instance):
    topics, params = lda_instance

    with pytest.raises(MissingMomentsError):
        eca_kurtosis(lda_modified_moments(topics, params), 4, seed=0)

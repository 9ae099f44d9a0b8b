import numpy as np
import pytest

from excess_correlation.model.exceptions import DimensionMismatchError
from excess_correlation.moments import (
    MultiViewMoments,
    exact_multiview_moments,
    multiview_sample_moments,
)
from excess_correlation.moments.multiview import VIEW_PAIRS
from excess_correlation.synthetic import generate_multiview
from tests.instances import bernoulli_factors, gaussian_topics


@pytest.fixture
def view_topics(rng):
    return [gaussian_topics(d, 3, rng) for d in (8, 6, 7)]


def test_exact_multiview_shapes(view_topics):
    _, factors = bernoulli_factors(3)

    moments = exact_multiview_moments(*view_topics, factors)

    assert moments.dims == (8, 6, 7)
    for first, second in VIEW_PAIRS:
        assert np.allclose(moments.pairs[(first, second)], moments.pairs[(second, first)].T)
    assert moments.triples_132(np.ones(7)).shape == (8, 6)


def test_exact_triples_132(view_topics, rng):
    _, factors = bernoulli_factors(3)
    eta = rng.standard_normal(7)
    first, second, third = (topics.entries for topics in view_topics)

    moments = exact_multiview_moments(*view_topics, factors)
    expected = sum(
        m * (third[:, i] @ eta) * np.outer(first[:, i], second[:, i])
        for i, m in enumerate(factors.third_moments)
    )

    assert np.allclose(moments.triples_132(eta), expected)


def test_triples_132_rejects_wrong_direction(view_topics):
    _, factors = bernoulli_factors(3)

    with pytest.raises(DimensionMismatchError):
        exact_multiview_moments(*view_topics, factors).triples_132(np.ones(6))


def test_exact_multiview_rejects_wrong_k(view_topics):
    _, factors = bernoulli_factors(2)

    with pytest.raises(DimensionMismatchError):
        exact_multiview_moments(*view_topics, factors)


def test_multiview_moments_rejects_inconsistent_pairs(view_topics):
    _, factors = bernoulli_factors(3)
    moments = exact_multiview_moments(*view_topics, factors)
    pairs = dict(moments.pairs)
    pairs[(2, 1)] = pairs[(2, 1)] + 1.0

    with pytest.raises(DimensionMismatchError):
        MultiViewMoments(moments.dims, pairs, moments.triples_132_contract)


def test_multiview_sample_moments_rejects_different_sample_counts(rng):
    with pytest.raises(DimensionMismatchError):
        multiview_sample_moments(rng.random((5, 2)), rng.random((5, 2)), rng.random((4, 2)))


@pytest.mark.slow
def test_multiview_sample_moments_converge(view_topics):
    rng = np.random.default_rng(5)
    distributions, factors = bernoulli_factors(3)
    scaled = [topics.entries / np.sqrt(topics.d) for topics in view_topics]
    eta = np.ones(7) / np.sqrt(7)

    samples = generate_multiview(scaled, distributions, 200_000, rng, noise_scale=0.5)
    estimated = multiview_sample_moments(*samples.views)
    exact = exact_multiview_moments(*scaled, factors)

    for pair in VIEW_PAIRS:
        assert np.allclose(estimated.pairs[pair], exact.pairs[pair], atol=0.01)
    assert np.allclose(estimated.triples_132(eta), exact.triples_132(eta), atol=0.01)

import numpy as np
import pytest

from excess_correlation.model import Corpus, DirichletParams
from excess_correlation.model.exceptions import (
    DimensionMismatchError,
    EmptyAccumulatorError,
    EmptyCorpusError,
    MissingMomentsError,
    OptionsMismatchError,
)
from excess_correlation.moments import (
    EstimatorMode,
    MomentAccumulator,
    MomentOptions,
    accumulate,
    lda_raw_moments,
)
from excess_correlation.moments.moment_set import materialize
from excess_correlation.synthetic import generate_lda_corpus
from tests.instances import brute_force_moments, stochastic_topics, toy_corpus

OPTIONS = [
    MomentOptions(),
    MomentOptions(dense_pairs_cap=2),
]


def _assert_moments_close(actual, mean, pairs, triples, directions):
    assert np.allclose(actual.mean, mean)
    assert np.allclose(materialize(actual.pairs), pairs)
    for eta in directions:
        assert np.allclose(materialize(actual.triples(eta)), triples @ eta)


#######################
# Test the estimators #
#######################


@pytest.mark.parametrize("options", OPTIONS)
def test_all_distinct_triples_matches_brute_force(rng, options):
    """
    Averaging every ordered tuple of distinct positions gives the same moments
    whether pairs are dense or a linear operator.
    """
    corpus = toy_corpus(rng)
    mean, pairs, triples = brute_force_moments(corpus.tokens, corpus.d)

    moments = accumulate(corpus, options).finalize()

    assert moments.raw
    assert moments.n_samples == corpus.n_docs
    _assert_moments_close(moments, mean, pairs, triples, rng.standard_normal((3, corpus.d)))


def test_first_three_tokens_matches_brute_force(rng):
    corpus = toy_corpus(rng)
    leading = [document[:3] for document in corpus.tokens]
    mean, pairs, triples = brute_force_moments(leading, corpus.d)

    options = MomentOptions(estimator=EstimatorMode.FIRST_THREE_TOKENS)
    moments = accumulate(corpus, options).finalize()

    _assert_moments_close(moments, mean, pairs, triples, rng.standard_normal((3, corpus.d)))


def test_projected_accumulation_matches_projected_moments(rng):
    corpus = toy_corpus(rng)
    projection = rng.standard_normal((corpus.d, 2))
    theta = rng.standard_normal(2)

    full = accumulate(corpus).finalize()
    projected = accumulate(corpus, MomentOptions(projection=projection)).finalize()

    assert np.allclose(projected.mean, projection.T @ full.mean)
    assert np.allclose(projected.pairs, projection.T @ full.pairs @ projection)
    assert np.allclose(
        projected.triples(theta),
        projection.T @ full.triples(projection @ theta) @ projection,
    )


def test_triples_contraction_is_linear(rng):
    moments = accumulate(toy_corpus(rng)).finalize()
    eta, eta2 = rng.standard_normal(5), rng.standard_normal(5)

    assert np.allclose(
        moments.triples(2.0 * eta - eta2), 2.0 * moments.triples(eta) - moments.triples(eta2)
    )


def test_fourth_order_needs_four_tokens(rng):
    corpus = toy_corpus(rng, n_docs=30, min_len=3, max_len=6)
    too_short = int(np.sum(corpus.document_lengths < 4))

    accumulator = accumulate(corpus, MomentOptions(fourth_order=True))

    assert accumulator.n_skipped == too_short
    assert accumulator.finalize().has_quad


###################
# Test edge cases #
###################


def test_short_documents_are_skipped():
    corpus = Corpus.from_tokens([[0, 1], [0, 1, 2], [2]], 3)

    accumulator = accumulate(corpus)

    assert accumulator.n_docs == 1
    assert accumulator.n_skipped == 2
    assert accumulator.finalize().diagnostics["n_skipped"] == 2


def test_corpus_without_long_documents_raises():
    with pytest.raises(EmptyCorpusError):
        accumulate(Corpus.from_tokens([[0, 1], [1]], 2))


def test_first_tokens_need_ordered_tokens():
    corpus = Corpus.from_documents([{0: 2, 1: 1}], 2)
    options = MomentOptions(estimator="first-three-tokens")

    with pytest.raises(MissingMomentsError):
        accumulate(corpus, options)


def test_empty_accumulator_cannot_finalize():
    with pytest.raises(EmptyAccumulatorError):
        MomentAccumulator.empty(4).finalize()


def test_projection_must_match_vocabulary():
    with pytest.raises(DimensionMismatchError):
        MomentAccumulator.empty(4, MomentOptions(projection=np.ones((3, 2))))


################
# Test merging #
################


def test_merge_matches_single_pass(rng):
    first, second = toy_corpus(rng), toy_corpus(rng)
    eta = rng.standard_normal(5)

    merged = accumulate(first).merge(accumulate(second)).finalize()
    single = accumulate(first.concatenate(second)).finalize()

    assert np.allclose(merged.mean, single.mean)
    assert np.allclose(merged.pairs, single.pairs)
    assert np.allclose(merged.triples(eta), single.triples(eta))


def test_merge_is_commutative_and_associative(rng):
    parts = [accumulate(toy_corpus(rng)) for _ in range(3)]
    eta = rng.standard_normal(5)

    left = parts[0].merge(parts[1]).merge(parts[2]).finalize()
    right = parts[2].merge(parts[1].merge(parts[0])).finalize()

    assert left.n_samples == right.n_samples == 36
    assert np.allclose(left.pairs, right.pairs)
    assert np.allclose(left.triples(eta), right.triples(eta))


def test_merge_with_empty_accumulator(rng):
    accumulator = accumulate(toy_corpus(rng))

    merged = MomentAccumulator.empty(5).merge(accumulator).finalize()

    assert np.allclose(merged.pairs, accumulator.finalize().pairs)


MISMATCHED = [
    (5, MomentOptions(estimator=EstimatorMode.FIRST_THREE_TOKENS)),
    (5, MomentOptions(dense_pairs_cap=2)),
    (6, MomentOptions()),
]


@pytest.mark.parametrize("d, options", MISMATCHED)
def test_merge_rejects_mismatched_accumulators(rng, d, options):
    with pytest.raises(OptionsMismatchError):
        accumulate(toy_corpus(rng)).merge(MomentAccumulator.empty(d, options))


#####################
# Test unbiasedness #
#####################


@pytest.mark.slow
def test_lda_corpus_moments_are_unbiased():
    rng = np.random.default_rng(3)
    topics = stochastic_topics(6, 2, rng)
    params = DirichletParams([0.4, 0.8])
    corpus = generate_lda_corpus(topics, params, 100_000, 5, rng)
    eta = np.linspace(-1.0, 1.0, 6)

    estimated = accumulate(corpus).finalize()
    exact = lda_raw_moments(topics, params)

    assert np.allclose(estimated.mean, exact.mean, atol=5e-3)
    assert np.allclose(estimated.pairs, exact.pairs, atol=5e-3)
    assert np.allclose(estimated.triples(eta), exact.triples(eta), atol=5e-3)

@pytest.mark.slow
def test_pairs_error_decays_at_root_n():
    """The median spectral-norm error of the pairs shrinks like N^(-1/2)."""
    rng = np.random.default_rng(11)
    topics = stochastic_topics(20, 3, rng)
    params = DirichletParams([0.3, 0.5, 0.7])
    exact = lda_raw_moments(topics, params).dense_pairs
    sample_sizes = [1_000, 10_000, 100_000]

    def pairs_error(n_docs):
        corpus = generate_lda_corpus(topics, params, n_docs, 5, rng)
        return np.linalg.norm(accumulate(corpus).finalize().dense_pairs - exact, ord=2)

    medians = [np.median([pairs_error(n) for _ in range(5)]) for n in sample_sizes]
    slope = np.polyfit(np.log(sample_sizes), np.log(medians), 1)[0]

    assert -0.65 <= slope <= -0.35

import numpy as np
import pytest
from scipy.sparse.linalg import aslinearoperator

from excess_correlation.model.exceptions import (
    DimensionMismatchError,
    MissingMomentsError,
    NegativeAlpha0Error,
)
from excess_correlation.moments import MomentSet, Provenance, lda_raw_moments
from excess_correlation.moments.moment_set import dirichlet_coefficients, materialize


def _random_moments(rng, d: int = 5, raw: bool = True) -> MomentSet:
    pairs = rng.standard_normal((d, d))
    tensor = rng.standard_normal((d, d, d))
    tensor = sum(np.transpose(tensor, axes) for axes in [(0, 1, 2), (1, 0, 2), (2, 1, 0)])
    return MomentSet(
        mean=rng.random(d),
        pairs=pairs @ pairs.T,
        triples_contract=lambda eta: np.einsum("abc,c->ab", tensor, eta),
        raw=raw,
    )


###############################
# Test dirichlet_coefficients #
###############################

COEFFICIENTS = [
    (0.0, {"pairs": 0.0, "cross": 0.0, "mean": 0.0}),
    (1.0, {"pairs": 0.5, "cross": 1.0 / 3.0, "mean": 1.0 / 3.0}),
    (np.inf, {"pairs": 1.0, "cross": 1.0, "mean": 2.0}),
]


@pytest.mark.parametrize("alpha0, expected", COEFFICIENTS)
def test_dirichlet_coefficients(alpha0, expected):
    actual = dirichlet_coefficients(alpha0)

    assert actual == pytest.approx(expected)


@pytest.mark.parametrize("alpha0", [-1.0, np.nan])
def test_dirichlet_coefficients_rejects_invalid_alpha0(alpha0):
    with pytest.raises(NegativeAlpha0Error):
        dirichlet_coefficients(alpha0)


def test_large_alpha0_approaches_central_limit():
    large = dirichlet_coefficients(1e12)

    assert large == pytest.approx(dirichlet_coefficients(np.inf), rel=1e-9)


##################
# Test MomentSet #
##################


def test_moment_set_symmetrizes_dense_pairs():
    moments = MomentSet(np.zeros(2), np.array([[1.0, 2.0], [0.0, 1.0]]), lambda eta: None)

    assert np.array_equal(moments.pairs, [[1.0, 1.0], [1.0, 1.0]])
    assert moments.provenance == Provenance.ANALYTIC


def test_moment_set_rejects_mismatched_pairs():
    with pytest.raises(DimensionMismatchError):
        MomentSet(np.zeros(3), np.eye(2), lambda eta: None)


def test_moment_set_rejects_wrong_direction(rng):
    moments = _random_moments(rng)

    with pytest.raises(DimensionMismatchError):
        moments.triples(np.ones(4))


def test_moment_set_without_quad_raises(rng):
    moments = _random_moments(rng)

    assert not moments.has_quad
    with pytest.raises(MissingMomentsError):
        moments.quad(np.ones(5), np.ones(5))


def test_project(rng):
    """Projected moments are W^T Pairs W and W^T Triples(W theta) W."""
    moments = _random_moments(rng)
    basis = rng.standard_normal((5, 2))
    theta = rng.standard_normal(2)

    projected = moments.project(basis)

    assert np.allclose(projected.mean, basis.T @ moments.mean)
    assert np.allclose(projected.pairs, basis.T @ moments.pairs @ basis)
    assert np.allclose(
        projected.triples(theta), basis.T @ moments.triples(basis @ theta) @ basis
    )


def test_project_rejects_wrong_basis(rng):
    with pytest.raises(DimensionMismatchError):
        _random_moments(rng).project(np.ones((4, 2)))


@pytest.mark.parametrize("alpha0", [0.0, 0.5, 3.0, np.inf])
def test_modified_operator_matches_dense(rng, alpha0):
    """Operator-valued moments are modified exactly as their dense counterparts."""
    dense = _random_moments(rng)
    operator = MomentSet(
        mean=dense.mean,
        pairs=aslinearoperator(dense.pairs),
        triples_contract=lambda eta: aslinearoperator(dense.triples(eta)),
        raw=True,
    )
    eta = rng.standard_normal(5)

    dense_modified = dense.modified(alpha0)
    operator_modified = operator.modified(alpha0)

    assert not dense_modified.raw
    assert np.allclose(materialize(operator_modified.pairs), dense_modified.pairs)
    assert np.allclose(
        materialize(operator_modified.triples(eta)), dense_modified.triples(eta)
    )


def test_zero_alpha0_leaves_moments_unchanged(rng):
    moments = _random_moments(rng)
    eta = rng.standard_normal(5)

    modified = moments.modified(0.0)

    assert np.array_equal(modified.pairs, moments.pairs)
    assert np.array_equal(modified.triples(eta), moments.triples(eta))


def test_centered_gives_covariance_and_third_cumulant(rng):
    """Centering raw moments of a point mass at mu leaves nothing."""
    mu = rng.random(4)
    moments = MomentSet(
        mean=mu,
        pairs=np.outer(mu, mu),
        triples_contract=lambda eta: (eta @ mu) * np.outer(mu, mu),
        raw=True,
    )

    central = moments.centered()

    assert np.allclose(central.pairs, 0.0)
    assert np.allclose(central.triples(rng.standard_normal(4)), 0.0)
    assert central.centered() is central


def test_modified_records_alpha0(lda_instance):
    topics, params = lda_instance

    modified = lda_raw_moments(topics, params).modified(params.alpha0)

    assert modified.diagnostics["alpha0"] == params.alpha0

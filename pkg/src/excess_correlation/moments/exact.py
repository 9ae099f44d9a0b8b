from typing import Tuple, Union

import numpy as np

from excess_correlation.model.exceptions import DimensionMismatchError
from excess_correlation.model.factors import FactorSpec
from excess_correlation.model.topics import TopicMatrix, as_matrix
from excess_correlation.moments.moment_set import MomentSet, Provenance

Topics = Union[TopicMatrix, np.ndarray]


def exact_pairs(topics: Topics, factors: FactorSpec) -> np.ndarray:
    """O diag(sigma_1^2, ..., sigma_k^2) O^T for independent factors."""
    topics = _check_dimensions(topics, factors)
    return (topics * factors.variances) @ topics.T


def exact_triples_contract(
    topics: Topics, factors: FactorSpec, eta: np.ndarray
) -> np.ndarray:
    """O diag(O^T eta) diag(mu_{1,3}, ..., mu_{k,3}) O^T for independent factors."""
    topics = _check_dimensions(topics, factors)
    (eta,) = _check_directions(topics, eta)
    return (topics * (topics.T @ eta) * factors.third_moments) @ topics.T


def exact_quad_contract(
    topics: Topics, factors: FactorSpec, eta: np.ndarray, eta2: np.ndarray
) -> np.ndarray:
    """
    O diag(O^T eta) diag(O^T eta2) diag(mu_{i,4} - 3 sigma_i^4) O^T for
    independent factors. Gaussian factors give the zero matrix.
    """
    topics = _check_dimensions(topics, factors)
    eta, eta2 = _check_directions(topics, eta, eta2)
    weights = (topics.T @ eta) * (topics.T @ eta2) * factors.fourth_cumulants
    return (topics * weights) @ topics.T


def exact_moments(topics: Topics, factors: FactorSpec) -> MomentSet:
    """
    Central moments of x = O h + noise for independent factors h.

    The mean is O E[h] when the factor mean is known, zero otherwise; only the
    central moments enter the skewed and kurtotic algorithms.
    """
    matrix = _check_dimensions(topics, factors)
    mean = matrix @ factors.mean if factors.mean is not None else np.zeros(len(matrix))
    return MomentSet(
        mean=mean,
        pairs=exact_pairs(matrix, factors),
        triples_contract=lambda eta: exact_triples_contract(matrix, factors, eta),
        provenance=Provenance.ANALYTIC,
        quad_contract=lambda eta, eta2: exact_quad_contract(matrix, factors, eta, eta2),
    )


def _check_dimensions(topics: Topics, factors: FactorSpec) -> np.ndarray:
    topics = as_matrix(topics)
    if topics.shape[1] != factors.k:
        raise DimensionMismatchError(
            f"Topic matrix has {topics.shape[1]} columns but there are {factors.k} factors."
        )
    return topics


def _check_directions(topics: np.ndarray, *directions: np.ndarray) -> Tuple[np.ndarray, ...]:
    directions = tuple(np.asarray(eta, dtype=float) for eta in directions)
    for eta in directions:
        if eta.shape != (topics.shape[0],):
            raise DimensionMismatchError(
                f"Contraction direction must have shape ({topics.shape[0]},), found "
                f"{eta.shape}."
            )
    return directions

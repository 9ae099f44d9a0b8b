from typing import Callable, NamedTuple, Union

import numpy as np

from excess_correlation.model.exceptions import (
    DimensionMismatchError,
    InvalidDirichletParamsError,
)
from excess_correlation.model.factors import DirichletParams
from excess_correlation.model.topics import TopicMatrix, as_matrix
from excess_correlation.moments.moment_set import MomentSet, Provenance

Topics = Union[TopicMatrix, np.ndarray]


class DirichletMoments(NamedTuple):
    mean: np.ndarray
    second: np.ndarray
    third_contract: Callable[[np.ndarray], np.ndarray]


def dirichlet_raw_moments(params: DirichletParams) -> DirichletMoments:
    """
    Closed-form non-central moments of h ~ Dir(alpha).

    Returns
    -------
    E[h] = alpha / alpha0, E[h h^T] = (diag(alpha) + alpha alpha^T) / ((alpha0 + 1) alpha0)
    and the contraction v -> E[h h^T <v, h>].
    """
    alpha, alpha0 = params.alpha, params.alpha0
    second = (np.diag(alpha) + np.outer(alpha, alpha)) / ((alpha0 + 1.0) * alpha0)
    third_scale = 1.0 / ((alpha0 + 2.0) * (alpha0 + 1.0) * alpha0)

    def third_contract(v: np.ndarray) -> np.ndarray:
        v = np.asarray(v, dtype=float)
        if v.shape != alpha.shape:
            raise DimensionMismatchError(
                f"Contraction vector must have {len(alpha)} entries, found {v.shape}."
            )
        weighted = alpha * v
        v_alpha = float(v @ alpha)
        return third_scale * (
            v_alpha * np.outer(alpha, alpha)
            + np.outer(weighted, alpha)
            + np.outer(alpha, weighted)
            + v_alpha * np.diag(alpha)
            + 2.0 * np.diag(weighted)
        )

    return DirichletMoments(alpha / alpha0, second, third_contract)


def lda_raw_moments(topics: Topics, params: DirichletParams) -> MomentSet:
    """Exact non-central word moments of an LDA model with topic matrix O."""
    matrix = _check_topics(topics, params.k)
    moments = dirichlet_raw_moments(params)
    return MomentSet(
        mean=matrix @ moments.mean,
        pairs=matrix @ moments.second @ matrix.T,
        triples_contract=lambda eta: (
            matrix @ moments.third_contract(matrix.T @ eta) @ matrix.T
        ),
        provenance=Provenance.ANALYTIC,
        raw=True,
    )


def single_topic_raw_moments(topics: Topics, weights: np.ndarray) -> MomentSet:
    """
    Exact non-central word moments when every document has a single topic.

    This is the alpha0 -> 0 limit of the LDA model with alpha = alpha0 * weights:
    E[h h^T] = diag(w) and E[h h^T <v, h>] = diag(w * v).
    """
    weights = np.asarray(weights, dtype=float)
    if np.any(weights < 0.0) or not np.isclose(weights.sum(), 1.0):
        raise InvalidDirichletParamsError(
            f"Topic weights must be a probability vector, found {weights}."
        )
    matrix = _check_topics(topics, len(weights))
    return MomentSet(
        mean=matrix @ weights,
        pairs=(matrix * weights) @ matrix.T,
        triples_contract=lambda eta: (matrix * (weights * (matrix.T @ eta))) @ matrix.T,
        provenance=Provenance.ANALYTIC,
        raw=True,
    )


def lda_modified_moments(topics: Topics, params: DirichletParams) -> MomentSet:
    """
    The modified LDA moments in closed form:
    Pairs_alpha0 = O diag(alpha) O^T / ((alpha0 + 1) alpha0) and
    Triples_alpha0(eta) = 2 O diag(O^T eta) diag(alpha) O^T
    / ((alpha0 + 2)(alpha0 + 1) alpha0).
    """
    matrix = _check_topics(topics, params.k)
    alpha, alpha0 = params.alpha, params.alpha0
    pairs_scale = 1.0 / ((alpha0 + 1.0) * alpha0)
    triples_scale = 2.0 / ((alpha0 + 2.0) * (alpha0 + 1.0) * alpha0)
    return MomentSet(
        mean=matrix @ params.mean,
        pairs=pairs_scale * (matrix * alpha) @ matrix.T,
        triples_contract=lambda eta: triples_scale
        * (matrix * (alpha * (matrix.T @ eta))) @ matrix.T,
        provenance=Provenance.ANALYTIC,
        diagnostics={"alpha0": alpha0},
    )


def _check_topics(topics: Topics, k: int) -> np.ndarray:
    matrix = as_matrix(topics)
    if matrix.shape[1] != k:
        raise DimensionMismatchError(
            f"Topic matrix has {matrix.shape[1]} columns but the prior has {k} topics."
        )
    return matrix

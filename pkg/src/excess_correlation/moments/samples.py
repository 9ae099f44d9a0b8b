import itertools
from typing import Sequence, Union

import numpy as np
from scipy import sparse

from excess_correlation.model.exceptions import DimensionMismatchError, MissingMomentsError
from excess_correlation.moments.moment_set import MomentSet, Provenance

View = Union[np.ndarray, sparse.spmatrix]


def centered_cross(
    left: View,
    right: View,
    weights: np.ndarray,
    left_mean: np.ndarray,
    right_mean: np.ndarray,
) -> np.ndarray:
    """
    The weighted average of (l - mu_l)(r - mu_r)^T over the rows of two views.

    Sparse views are never densified; only the d x d result is.
    """
    n = left.shape[0]
    if sparse.issparse(right):
        weighted_right = sparse.csr_matrix(right.multiply(weights[:, None]))
    else:
        weighted_right = right * weights[:, None]
    cross = left.T @ weighted_right
    cross = cross.toarray() if sparse.issparse(cross) else np.asarray(cross)
    left_weighted_sum = np.asarray(left.T @ weights).ravel()
    right_weighted_sum = np.asarray(right.T @ weights).ravel()
    return (
        cross
        - np.outer(left_weighted_sum, right_mean)
        - np.outer(left_mean, right_weighted_sum)
        + weights.sum() * np.outer(left_mean, right_mean)
    ) / n


def column_mean(view: View) -> np.ndarray:
    return np.asarray(view.mean(axis=0)).ravel()


def sample_moments(views: Sequence[View]) -> MomentSet:
    """
    Empirical central moments from exchangeable views.

    Parameters
    ----------
    views
        Three or more n x d arrays (dense or sparse), row i of each holding one
        conditionally independent observation of sample i.

    Returns
    -------
    A MomentSet whose pairs average every ordered pair of distinct views, whose
    third-order contraction averages every arrangement of the first three
    views and which, given a fourth view, carries the Gaussian-corrected
    fourth-order contraction.
    """
    views = [
        view if sparse.issparse(view) else np.asarray(view, dtype=float) for view in views
    ]
    if len(views) < 3:
        raise MissingMomentsError(f"At least three views are needed, found {len(views)}.")
    shapes = {view.shape for view in views}
    if len(shapes) != 1:
        raise DimensionMismatchError(f"All views must share a shape, found {shapes}.")
    n, _ = views[0].shape

    mean = np.mean([column_mean(view) for view in views], axis=0)
    ones = np.ones(n)
    ordered_pairs = list(itertools.permutations(range(len(views)), 2))
    pairs = sum(
        centered_cross(views[a], views[b], ones, mean, mean) for a, b in ordered_pairs
    ) / len(ordered_pairs)

    def triples_contract(eta: np.ndarray) -> np.ndarray:
        projections = [np.asarray(view @ eta).ravel() - mean @ eta for view in views[:3]]
        arrangements = list(itertools.permutations(range(3)))
        return sum(
            centered_cross(views[a], views[b], projections[c], mean, mean)
            for a, b, c in arrangements
        ) / len(arrangements)

    quad_contract = None
    if len(views) >= 4:

        def quad_contract(eta: np.ndarray, eta2: np.ndarray) -> np.ndarray:
            weights = (np.asarray(views[2] @ eta).ravel() - mean @ eta) * (
                np.asarray(views[3] @ eta2).ravel() - mean @ eta2
            )
            fourth = centered_cross(views[0], views[1], weights, mean, mean)
            fourth = (fourth + fourth.T) / 2.0
            pairs_eta, pairs_eta2 = pairs @ eta, pairs @ eta2
            return (
                fourth
                - (eta @ pairs_eta2) * pairs
                - np.outer(pairs_eta, pairs_eta2)
                - np.outer(pairs_eta2, pairs_eta)
            )

    return MomentSet(
        mean=mean,
        pairs=pairs,
        triples_contract=triples_contract,
        provenance=Provenance.EMPIRICAL,
        quad_contract=quad_contract,
        n_samples=n,
    )

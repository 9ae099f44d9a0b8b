import dataclasses
from typing import Callable, Dict, Tuple, Union

import numpy as np

from excess_correlation.model.exceptions import DimensionMismatchError
from excess_correlation.model.factors import FactorSpec
from excess_correlation.model.topics import TopicMatrix, as_matrix
from excess_correlation.moments.moment_set import Provenance
from excess_correlation.moments.samples import centered_cross, column_mean

ViewPair = Tuple[int, int]

VIEW_PAIRS = [(1, 2), (3, 1), (3, 2), (2, 1), (1, 3), (2, 3)]


@dataclasses.dataclass(frozen=True)
class MultiViewMoments:
    """
    Cross-view central moments of a three-view model.

    ``pairs[(v, w)]`` is the d_v x d_w matrix E[(x_v - mu_v)(x_w - mu_w)^T]
    (views numbered 1 to 3) and ``triples_132_contract(eta)`` the d_1 x d_2
    matrix E[(x_1 - mu_1)(x_2 - mu_2)^T <eta, x_3 - mu_3>] for eta of length d_3.
    """

    dims: Tuple[int, int, int]
    pairs: Dict[ViewPair, np.ndarray]
    triples_132_contract: Callable[[np.ndarray], np.ndarray]
    provenance: Provenance = Provenance.ANALYTIC

    def __post_init__(self):
        for first, second in VIEW_PAIRS:
            matrix = self.pairs.get((first, second))
            expected = (self.dims[first - 1], self.dims[second - 1])
            if matrix is None or matrix.shape != expected:
                raise DimensionMismatchError(
                    f"Pairs for views ({first}, {second}) must have shape {expected}."
                )
            transpose = self.pairs[(second, first)]
            if not np.allclose(matrix, transpose.T, rtol=0.0, atol=1e-10):
                raise DimensionMismatchError(
                    f"Pairs for views ({first}, {second}) and ({second}, {first}) are not "
                    "transposes of each other."
                )

    def triples_132(self, eta: np.ndarray) -> np.ndarray:
        eta = np.asarray(eta, dtype=float)
        if eta.shape != (self.dims[2],):
            raise DimensionMismatchError(
                f"Contraction direction must have shape ({self.dims[2]},), found {eta.shape}."
            )
        return self.triples_132_contract(eta)


def exact_multiview_moments(
    topics_1: Union[TopicMatrix, np.ndarray],
    topics_2: Union[TopicMatrix, np.ndarray],
    topics_3: Union[TopicMatrix, np.ndarray],
    factors: FactorSpec,
) -> MultiViewMoments:
    """
    Pairs_{v,w} = O_v diag(sigma^2) O_w^T and
    Triples_132(eta) = O_1 diag(O_3^T eta) diag(mu_3) O_2^T.
    """
    views = {1: as_matrix(topics_1), 2: as_matrix(topics_2), 3: as_matrix(topics_3)}
    for view, matrix in views.items():
        if matrix.shape[1] != factors.k:
            raise DimensionMismatchError(
                f"View {view} has {matrix.shape[1]} columns but there are {factors.k} factors."
            )
    pairs = {
        (first, second): (views[first] * factors.variances) @ views[second].T
        for first, second in VIEW_PAIRS
    }

    def triples_132_contract(eta: np.ndarray) -> np.ndarray:
        weights = (views[3].T @ eta) * factors.third_moments
        return (views[1] * weights) @ views[2].T

    return MultiViewMoments(
        dims=tuple(len(views[view]) for view in (1, 2, 3)),
        pairs=pairs,
        triples_132_contract=triples_132_contract,
    )


def multiview_sample_moments(
    view_1: np.ndarray, view_2: np.ndarray, view_3: np.ndarray
) -> MultiViewMoments:
    """Empirical cross-view central moments from n x d_v samples of three views."""
    views = {1: view_1, 2: view_2, 3: view_3}
    n_samples = {view.shape[0] for view in views.values()}
    if len(n_samples) != 1:
        raise DimensionMismatchError(f"Views hold different numbers of samples: {n_samples}.")
    means = {view: column_mean(samples) for view, samples in views.items()}
    ones = np.ones(n_samples.pop())
    pairs = {}
    for first, second in [(1, 2), (3, 1), (3, 2)]:
        pairs[(first, second)] = centered_cross(
            views[first], views[second], ones, means[first], means[second]
        )
        pairs[(second, first)] = pairs[(first, second)].T

    def triples_132_contract(eta: np.ndarray) -> np.ndarray:
        weights = np.asarray(views[3] @ eta).ravel() - means[3] @ eta
        return centered_cross(views[1], views[2], weights, means[1], means[2])

    return MultiViewMoments(
        dims=tuple(views[view].shape[1] for view in (1, 2, 3)),
        pairs=pairs,
        triples_132_contract=triples_132_contract,
        provenance=Provenance.EMPIRICAL,
    )

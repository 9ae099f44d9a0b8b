import dataclasses

import numpy as np
from loguru import logger
from scipy import linalg
from scipy.sparse.linalg import LinearOperator, svds

from excess_correlation.constants import Tolerances
from excess_correlation.model.exceptions import (
    InsufficientRankError,
    SingularProjectedPairsError,
)
from excess_correlation.moments.moment_set import Operator, materialize, sandwich
from excess_correlation.spectral.utilities import Seed, get_rng, spectral_norm

# Larger dense pairs matrices are decomposed with the sparse solver
DENSE_SVD_LIMIT = 2_000


@dataclasses.dataclass(frozen=True)
class WhiteningMap:
    """
    A whitening map W = U V with W^T Pairs W = I_k.

    Attributes
    ----------
    range_basis
        The d x k basis U.
    whitener
        The k x k matrix V.
    whitening
        The d x k matrix W.
    pseudo_inverse
        The k x d matrix (W^T W)^{-1} W^T.
    residual
        The spectral norm of W^T Pairs W - I_k.
    """

    range_basis: np.ndarray
    whitener: np.ndarray
    whitening: np.ndarray
    pseudo_inverse: np.ndarray
    residual: float

    @property
    def d(self) -> int:
        return self.whitening.shape[0]

    @property
    def k(self) -> int:
        return self.whitening.shape[1]

    def reconstruct(self, vectors: np.ndarray) -> np.ndarray:
        """Map whitened coordinates back to observations: (W^+)^T lambda."""
        return self.pseudo_inverse.T @ vectors


def whiten(pairs: Operator, range_basis: np.ndarray) -> WhiteningMap:
    """
    Whiten pairs on the range of U through the eigendecomposition of U^T Pairs U.

    The whitener is V = Q diag(lambda)^(-1/2), so W = U V satisfies
    W^T Pairs W = I_k.
    """
    projected = sandwich(range_basis, pairs)
    eigenvalues, eigenvectors = linalg.eigh((projected + projected.T) / 2.0)
    largest = eigenvalues.max()
    if largest <= 0.0 or eigenvalues.min() <= Tolerances.PROJECTED_PAIRS_EIGENVALUE * largest:
        raise SingularProjectedPairsError(
            f"Projected pairs are singular or indefinite: eigenvalues {eigenvalues}."
        )
    whitener = eigenvectors / np.sqrt(eigenvalues)
    return _make_whitening_map(pairs, range_basis, whitener)


def truncated_whiten(pairs_hat: Operator, k: int, seed: Seed = None) -> WhiteningMap:
    """
    Whiten with the top-k singular pairs of an empirical pairs matrix.

    The whitening is W = A diag(s)^(-1/2) where A holds the top-k left singular
    vectors and s the top-k singular values. Operators are decomposed with a
    seeded sparse SVD, dense matrices with a full SVD.
    """
    d = pairs_hat.shape[0]
    if k > d:
        raise InsufficientRankError(f"Cannot keep k = {k} directions in dimension {d}.")

    if (isinstance(pairs_hat, LinearOperator) or d > DENSE_SVD_LIMIT) and k < d - 1:
        start = get_rng(seed).standard_normal(d)
        left, values, _ = svds(pairs_hat, k=k, v0=start)
        order = np.argsort(-values)
        left, values = left[:, order], values[order]
    else:
        left, values, _ = linalg.svd(materialize(pairs_hat))
        left, values = left[:, :k], values[:k]

    if values[0] <= 0.0 or values[-1] <= Tolerances.PROJECTED_PAIRS_EIGENVALUE * values[0]:
        raise InsufficientRankError(
            f"Empirical pairs have fewer than k = {k} significant singular values: {values}."
        )
    return _make_whitening_map(pairs_hat, left, np.diag(1.0 / np.sqrt(values)))


def _make_whitening_map(
    pairs: Operator, range_basis: np.ndarray, whitener: np.ndarray
) -> WhiteningMap:
    whitening = range_basis @ whitener
    pseudo_inverse = linalg.solve(whitening.T @ whitening, whitening.T, assume_a="pos")
    residual = spectral_norm(sandwich(whitening, pairs) - np.eye(whitening.shape[1]))
    logger.debug(f"Whitened pairs to dimension {whitening.shape[1]}, residual {residual:.3e}.")
    return WhiteningMap(range_basis, whitener, whitening, pseudo_inverse, residual)

import dataclasses
from typing import Callable, Optional

import numpy as np
from loguru import logger
from scipy import linalg

from excess_correlation.constants import Tolerances
from excess_correlation.model.exceptions import DimensionMismatchError
from excess_correlation.model.topics import fix_column_signs
from excess_correlation.spectral.utilities import (
    Seed,
    orthonormalize,
    random_orthonormal_basis,
)


@dataclasses.dataclass(frozen=True)
class SvdExtraction:
    """Candidate singular vectors (as columns) and which of them are unique."""

    vectors: np.ndarray
    values: np.ndarray
    uniqueness_mask: np.ndarray
    gap_tolerance: float
    converged: bool = True
    n_iter: Optional[int] = None

    @property
    def unique_vectors(self) -> np.ndarray:
        return self.vectors[:, self.uniqueness_mask]

    @property
    def unique_values(self) -> np.ndarray:
        return self.values[self.uniqueness_mask]

    @property
    def gaps(self) -> np.ndarray:
        return _gaps(self.values)


def unique_singular_vectors(
    matrix: np.ndarray, gap_tol: float = Tolerances.SINGULAR_VALUE_GAP
) -> SvdExtraction:
    """
    Full SVD of a k x k matrix, flagging the left singular vectors whose
    singular value is separated from every other one by more than
    gap_tol * sigma_max.
    """
    matrix = np.asarray(matrix, dtype=float)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise DimensionMismatchError(f"Expected a square matrix, found shape {matrix.shape}.")
    if not np.all(np.isfinite(matrix)):
        raise DimensionMismatchError("Cannot decompose a matrix with non-finite entries.")

    left, values, _ = linalg.svd(matrix)
    return SvdExtraction(
        vectors=fix_column_signs(left),
        values=values,
        uniqueness_mask=uniqueness_mask(values, gap_tol),
        gap_tolerance=gap_tol,
    )


def power_iteration_svd(
    action: Callable[[np.ndarray], np.ndarray],
    k: int,
    seed: Seed = None,
    max_iter: int = 1_000,
    conv_tol: float = 1e-10,
    gap_tol: float = Tolerances.SINGULAR_VALUE_GAP,
) -> SvdExtraction:
    """
    Simultaneous power iteration from a random orthonormal basis of R^k.

    Each sweep replaces every v_i by action(v_i) and orthonormalizes the set.
    For a symmetric matrix T the action is v -> T v; for the whitened LDA
    third moment it is v -> T(v) v. Iteration stops once no vector moves by
    more than conv_tol (up to sign) or after max_iter sweeps.

    Returns
    -------
    An SvdExtraction whose values are the absolute Rayleigh quotients
    v_i^T action(v_i), recording whether the iteration converged.
    """
    vectors = random_orthonormal_basis(k, seed)
    converged = False
    n_iter = 0
    for n_iter in range(1, max_iter + 1):
        updated = orthonormalize(np.column_stack([action(vectors[:, i]) for i in range(k)]))
        change = np.minimum(
            linalg.norm(updated - vectors, axis=0), linalg.norm(updated + vectors, axis=0)
        ).max()
        vectors = updated
        if change < conv_tol:
            converged = True
            break
    if not converged:
        logger.warning(f"Power iteration did not converge in {max_iter} sweeps.")

    vectors = fix_column_signs(vectors)
    values = np.abs([vectors[:, i] @ action(vectors[:, i]) for i in range(k)])
    order = np.argsort(-values, kind="stable")
    values = values[order]
    return SvdExtraction(
        vectors=vectors[:, order],
        values=values,
        uniqueness_mask=uniqueness_mask(values, gap_tol),
        gap_tolerance=gap_tol,
        converged=converged,
        n_iter=n_iter,
    )


def uniqueness_mask(values: np.ndarray, gap_tol: float) -> np.ndarray:
    values = np.asarray(values, dtype=float)
    if len(values) == 0 or values.max() == 0.0:
        return np.zeros(len(values), dtype=bool)
    return _gaps(values) > gap_tol * values.max()


def _gaps(values: np.ndarray) -> np.ndarray:
    """The distance from each value to its nearest neighbour (inf when alone)."""
    values = np.asarray(values, dtype=float)
    if len(values) < 2:
        return np.full(len(values), np.inf)
    distances = np.abs(values[:, None] - values[None, :])
    np.fill_diagonal(distances, np.inf)
    return distances.min(axis=1)

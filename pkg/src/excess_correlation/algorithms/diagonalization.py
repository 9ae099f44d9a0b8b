import dataclasses
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
from loguru import logger

from excess_correlation.constants import Tolerances
from excess_correlation.model.exceptions import DimensionMismatchError
from excess_correlation.model.results import RecoveryStatus
from excess_correlation.moments.moment_set import MomentSet, sandwich
from excess_correlation.spectral import (
    WhiteningMap,
    randomized_range,
    unique_singular_vectors,
    whiten,
)
from excess_correlation.spectral.utilities import random_unit_vector

Contraction = Callable[..., np.ndarray]


@dataclasses.dataclass
class Diagonalization:
    """Unique singular vectors collected over one or more random directions."""

    vectors: np.ndarray
    values: np.ndarray
    thetas: List[Tuple[np.ndarray, ...]]
    min_gaps: List[float]

    @property
    def n_vectors(self) -> int:
        return self.vectors.shape[1]


def whiten_moments(moments: MomentSet, k: int, rng: np.random.Generator) -> WhiteningMap:
    """Randomized range finding on the pairs matrix followed by whitening."""
    if k < 1 or k > moments.d:
        raise DimensionMismatchError(f"k must lie in [1, {moments.d}], found {k}.")
    range_basis = randomized_range(moments.pairs, moments.d, k, rng)
    return whiten(moments.pairs, range_basis)


def whitened_triples(moments: MomentSet, whitening: WhiteningMap) -> Contraction:
    """theta -> W^T Triples(W theta) W."""
    basis = whitening.whitening
    return lambda theta: sandwich(basis, moments.triples(basis @ theta))


def whitened_quad(moments: MomentSet, whitening: WhiteningMap) -> Contraction:
    """(theta, theta2) -> W^T Quad(W theta, W theta2) W."""
    basis = whitening.whitening
    return lambda theta, theta2: sandwich(
        basis, moments.quad(basis @ theta, basis @ theta2)
    )


def diagonalize(
    contraction: Contraction,
    k: int,
    thetas: Optional[Sequence[np.ndarray]],
    n_directions: int,
    rng: np.random.Generator,
    gap_tol: float = Tolerances.SINGULAR_VALUE_GAP,
    retries: int = 5,
) -> Diagonalization:
    """
    Collect the uniquely determined singular vectors of contraction(theta, ...).

    The first attempt uses the given directions when provided; later attempts
    draw fresh directions uniformly from the sphere. Vectors already found
    (|<u, v>| > 1 - 1e-6) are not added twice. Stops once k vectors are known
    or after ``retries`` attempts.
    """
    vectors, values, used, min_gaps = [], [], [], []
    for attempt in range(max(retries, 1)):
        if attempt == 0 and thetas is not None:
            directions = tuple(np.asarray(theta, dtype=float) for theta in thetas)
            if any(theta.shape != (k,) for theta in directions):
                raise DimensionMismatchError(f"Each theta must have shape ({k},).")
        else:
            directions = tuple(random_unit_vector(k, rng) for _ in range(n_directions))
        used.append(directions)

        extraction = unique_singular_vectors(contraction(*directions), gap_tol)
        min_gaps.append(float(extraction.gaps.min()) if k > 1 else np.inf)
        add_new_vectors(
            vectors, values, extraction.unique_vectors, extraction.unique_values, k
        )
        if len(vectors) >= k:
            break

    if len(vectors) < k:
        logger.info(f"Found {len(vectors)} of {k} unique directions after {len(used)} tries.")
    return Diagonalization(
        vectors=np.column_stack(vectors) if vectors else np.zeros((k, 0)),
        values=np.array(values, dtype=float),
        thetas=used,
        min_gaps=min_gaps,
    )


def add_new_vectors(
    vectors: List[np.ndarray],
    values: List[float],
    candidates: np.ndarray,
    candidate_values: np.ndarray,
    k: int,
) -> None:
    """
    Append the columns of ``candidates`` that are not already known, up to k
    vectors in total. A candidate is known when |<u, v>| > 1 - 1e-6.
    """
    threshold = 1.0 - Tolerances.DEDUPLICATION
    for vector, value in zip(candidates.T, candidate_values):
        if len(vectors) >= k:
            return
        if all(abs(vector @ known) <= threshold for known in vectors):
            vectors.append(vector)
            values.append(float(value))


def reconstruct_columns(
    whitening: WhiteningMap, vectors: np.ndarray
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Reconstruct observation-space columns (W^+)^T lambda, flipping each column
    and its lambda so the largest-magnitude entry is positive.
    """
    columns = whitening.reconstruct(vectors)
    if columns.shape[1] == 0:
        return columns, vectors
    pivot = columns[np.argmax(np.abs(columns), axis=0), np.arange(columns.shape[1])]
    signs = np.where(pivot < 0.0, -1.0, 1.0)
    return columns * signs, vectors * signs


def cubic_form(contraction: Contraction, vectors: np.ndarray) -> np.ndarray:
    """lambda^T T(lambda) lambda for each column lambda."""
    return np.array([vector @ contraction(vector) @ vector for vector in vectors.T])


def quartic_form(contraction: Contraction, vectors: np.ndarray) -> np.ndarray:
    """lambda^T Q(lambda, lambda) lambda for each column lambda."""
    return np.array([vector @ contraction(vector, vector) @ vector for vector in vectors.T])


def recovery_status(n_columns: int, k: int) -> RecoveryStatus:
    return RecoveryStatus.COMPLETE if n_columns == k else RecoveryStatus.NOT_ALL_RECOVERED


def recovery_diagnostics(
    whitening: WhiteningMap, diagonalization: Diagonalization
) -> Dict[str, Any]:
    return {
        "whitening_residual": whitening.residual,
        "singular_value_gaps": diagonalization.min_gaps,
        "n_directions_tried": len(diagonalization.thetas),
    }

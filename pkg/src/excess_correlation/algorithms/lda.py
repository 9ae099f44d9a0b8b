from typing import List, Optional, Tuple, Union

import numpy as np
from loguru import logger
from scipy import linalg

from excess_correlation.algorithms.diagonalization import (
    cubic_form,
    diagonalize,
    reconstruct_columns,
    recovery_diagnostics,
    recovery_status,
    whiten_moments,
    whitened_triples,
)
from excess_correlation.constants import Tolerances
from excess_correlation.model.exceptions import NegativeAlpha0Error
from excess_correlation.model.results import RecoveryResult
from excess_correlation.model.topics import TopicMatrix, as_matrix, make_topic_matrix
from excess_correlation.moments.moment_set import MomentSet, Operator
from excess_correlation.spectral.utilities import Seed, get_rng


def eca_lda(
    moments: MomentSet,
    k: int,
    alpha0: float,
    theta: Optional[np.ndarray] = None,
    gap_tol: float = Tolerances.SINGULAR_VALUE_GAP,
    seed: Seed = None,
    retries: int = 5,
    normalize: bool = True,
) -> RecoveryResult:
    """
    Recover the topic matrix of an LDA model and its Dirichlet prior.

    Raw moments are first modified for the concentration alpha0. The canonical
    columns found by the decomposition are flipped to have a positive sum and, when
    ``normalize`` is set, divided by that sum to give probability columns. A
    column whose sum is negligible relative to its l1 norm cannot be
    normalized; it is dropped and reported in the diagnostics.

    Returns
    -------
    A RecoveryResult whose scale estimates are the column sums of the
    canonical columns (Z_i = sqrt(alpha_i / ((alpha0 + 1) alpha0))) and whose
    alpha_hat is set when all k topics were recovered.
    """
    if alpha0 < 0.0:
        raise NegativeAlpha0Error(f"alpha0 must be non-negative, found {alpha0}.")
    modified = moments.modified(alpha0) if moments.raw else moments
    rng = get_rng(seed)
    whitening = whiten_moments(modified, k, rng)
    contraction = whitened_triples(modified, whitening)
    diagonalization = diagonalize(
        contraction, k, None if theta is None else [theta], 1, rng, gap_tol, retries
    )
    canonical, vectors = reconstruct_columns(whitening, diagonalization.vectors)
    canonical, vectors, sums, kept, dropped = normalize_by_sum(canonical, vectors)

    columns = canonical / sums if normalize else canonical
    alpha_hat = None
    if columns.shape[1] == k:
        alpha_hat = recover_alpha(canonical / sums, modified.pairs, alpha0)
    logger.debug(f"LDA ECA recovered {columns.shape[1]} of {k} topics.")

    return RecoveryResult(
        columns=columns,
        singular_values=diagonalization.values[kept],
        skewness_estimates=cubic_form(contraction, vectors),
        scale_estimates=sums,
        alpha_hat=alpha_hat,
        theta_used=diagonalization.thetas[0][0],
        k=k,
        status=recovery_status(columns.shape[1], k),
        diagnostics={
            **recovery_diagnostics(whitening, diagonalization),
            "alpha0": alpha0,
            "dropped_degenerate_columns": dropped,
        },
    )


def normalize_by_sum(
    columns: np.ndarray, vectors: np.ndarray
) -> Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray, List[int]]:
    """
    Flip columns (and their whitened vectors) to have a positive entry sum and
    drop columns whose sum is at most 1e-8 of their l1 norm.

    Returns
    -------
    The kept columns, their vectors, their sums, the kept indices and the
    dropped indices.
    """
    sums = columns.sum(axis=0)
    l1_norms = np.abs(columns).sum(axis=0)
    kept = np.abs(sums) > Tolerances.DEGENERATE_COLUMN_SUM * l1_norms
    dropped = np.flatnonzero(~kept).tolist()
    if dropped:
        logger.warning(f"Dropping {len(dropped)} columns with a negligible entry sum.")
    signs = np.where(sums[kept] < 0.0, -1.0, 1.0)
    return (
        columns[:, kept] * signs,
        vectors[:, kept] * signs,
        np.abs(sums[kept]),
        np.flatnonzero(kept),
        dropped,
    )


def recover_alpha(
    topics: Union[TopicMatrix, np.ndarray], pairs_alpha0: Operator, alpha0: float
) -> np.ndarray:
    """
    Recover the Dirichlet parameters from probability columns and the modified
    pairs: alpha = alpha0 (alpha0 + 1) O^+ Pairs_alpha0 (O^+)^T 1.

    With alpha0 = 0 the prior is a point mass on single topics and the topic
    weights O^+ Pairs (O^+)^T 1 are returned instead.
    """
    if alpha0 < 0.0:
        raise NegativeAlpha0Error(f"alpha0 must be non-negative, found {alpha0}.")
    matrix = as_matrix(topics)
    make_topic_matrix(matrix)
    pseudo_inverse = linalg.pinv(matrix)
    weights = pseudo_inverse @ np.asarray(pairs_alpha0 @ pseudo_inverse.T).sum(axis=1)
    if alpha0 == 0.0:
        return weights
    return alpha0 * (alpha0 + 1.0) * weights

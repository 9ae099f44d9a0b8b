from typing import Optional

import numpy as np
from loguru import logger

from excess_correlation.algorithms.diagonalization import (
    cubic_form,
    diagonalize,
    quartic_form,
    reconstruct_columns,
    recovery_diagnostics,
    recovery_status,
    whiten_moments,
    whitened_quad,
    whitened_triples,
)
from excess_correlation.constants import Tolerances
from excess_correlation.model.exceptions import MissingMomentsError
from excess_correlation.model.results import RecoveryResult
from excess_correlation.moments.moment_set import MomentSet
from excess_correlation.spectral import WhiteningMap
from excess_correlation.spectral.utilities import Seed, get_rng


def eca_skew(
    moments: MomentSet,
    k: int,
    theta: Optional[np.ndarray] = None,
    gap_tol: float = Tolerances.SINGULAR_VALUE_GAP,
    seed: Seed = None,
    retries: int = 5,
) -> RecoveryResult:
    """
    Recover canonical columns of O for independent skewed factors.

    Whitens the pairs, takes the singular vectors of W^T Triples(W theta) W
    with isolated singular values, and returns (W^+)^T lambda for each of them.
    Raw moments are centered first. Every returned column is a canonical column
    of O for any theta. Factors with zero skewness share a zero singular value,
    so when two or more of them are present none of them is returned.

    Parameters
    ----------
    moments
        Central (or raw) moments with pairs and a third-order contraction.
    k
        The number of latent factors.
    theta
        The first direction to contract with; drawn at random when omitted.
    gap_tol
        Relative singular-value gap below which vectors count as tied.
    seed
        Seed for range finding and for any random directions.
    retries
        The number of directions to try before giving up on missing columns.

    Returns
    -------
    A RecoveryResult with columns sorted by singular value and the estimated
    skewness of each factor. Scale estimates are 1 since columns are canonical.
    """
    moments = moments.centered()
    rng = get_rng(seed)
    whitening = whiten_moments(moments, k, rng)
    contraction = whitened_triples(moments, whitening)
    diagonalization = diagonalize(
        contraction, k, None if theta is None else [theta], 1, rng, gap_tol, retries
    )
    columns, vectors = reconstruct_columns(whitening, diagonalization.vectors)
    logger.debug(f"Skewed ECA recovered {columns.shape[1]} of {k} columns.")
    return RecoveryResult(
        columns=columns,
        singular_values=diagonalization.values,
        skewness_estimates=cubic_form(contraction, vectors),
        scale_estimates=np.ones(columns.shape[1]),
        theta_used=diagonalization.thetas[0][0],
        k=k,
        status=recovery_status(columns.shape[1], k),
        diagnostics=recovery_diagnostics(whitening, diagonalization),
    )


def eca_kurtosis(
    moments: MomentSet,
    k: int,
    theta: Optional[np.ndarray] = None,
    theta2: Optional[np.ndarray] = None,
    gap_tol: float = Tolerances.SINGULAR_VALUE_GAP,
    seed: Seed = None,
    retries: int = 5,
) -> RecoveryResult:
    """
    Recover canonical columns of O for independent factors with non-zero excess
    kurtosis by diagonalizing W^T Quad(W theta, W theta2) W.
    """
    moments = moments.centered()
    if not moments.has_quad:
        raise MissingMomentsError("Kurtotic ECA needs a fourth-order contraction.")
    rng = get_rng(seed)
    whitening = whiten_moments(moments, k, rng)
    contraction = whitened_quad(moments, whitening)
    thetas = None
    if theta is not None or theta2 is not None:
        thetas = [
            direction if direction is not None else rng.standard_normal(k)
            for direction in (theta, theta2)
        ]
    diagonalization = diagonalize(contraction, k, thetas, 2, rng, gap_tol, retries)
    columns, vectors = reconstruct_columns(whitening, diagonalization.vectors)
    logger.debug(f"Kurtotic ECA recovered {columns.shape[1]} of {k} columns.")
    return RecoveryResult(
        columns=columns,
        singular_values=diagonalization.values,
        skewness_estimates=cubic_form(whitened_triples(moments, whitening), vectors),
        kurtosis_estimates=quartic_form(contraction, vectors),
        scale_estimates=np.ones(columns.shape[1]),
        theta_used=diagonalization.thetas[0][0],
        k=k,
        status=recovery_status(columns.shape[1], k),
        diagnostics={
            **recovery_diagnostics(whitening, diagonalization),
            "theta2_used": diagonalization.thetas[0][1],
        },
    )


def estimate_skewness(
    whitening: WhiteningMap, moments: MomentSet, vector: np.ndarray
) -> float:
    """lambda^T W^T Triples(W lambda) W lambda, the skewness of the matched factor."""
    vector = np.asarray(vector, dtype=float)
    return float(cubic_form(whitened_triples(moments, whitening), vector[:, None])[0])

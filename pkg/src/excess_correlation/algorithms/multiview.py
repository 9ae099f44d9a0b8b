from typing import Optional, Tuple

import numpy as np
from loguru import logger

from excess_correlation.algorithms.independent import eca_skew
from excess_correlation.constants import Tolerances
from excess_correlation.model.exceptions import SingularProjectionError
from excess_correlation.model.results import RecoveryResult
from excess_correlation.moments.moment_set import MomentSet
from excess_correlation.moments.multiview import MultiViewMoments
from excess_correlation.spectral.utilities import Seed, get_rng, orthonormalize


def find_projectors_ab(
    pairs12: np.ndarray,
    pairs21: np.ndarray,
    k: int,
    seed: Seed = None,
    max_retries: int = 5,
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Find A (k x d1) and B (k x d2) with A Pairs_12 B^T invertible.

    A spans the range of Pairs_12 Theta and B that of Pairs_21 Theta' for
    Gaussian Theta, Theta'; fresh draws are taken while the product's condition
    number exceeds 1e10.
    """
    pairs12, pairs21 = np.asarray(pairs12, dtype=float), np.asarray(pairs21, dtype=float)
    rng = get_rng(seed)
    condition = np.inf
    for attempt in range(max(max_retries, 1)):
        projector_a = orthonormalize(pairs12 @ rng.standard_normal((pairs12.shape[1], k))).T
        projector_b = orthonormalize(pairs21 @ rng.standard_normal((pairs21.shape[1], k))).T
        condition = np.linalg.cond(projector_a @ pairs12 @ projector_b.T)
        if condition <= Tolerances.MULTIVIEW_CONDITION_NUMBER:
            return projector_a, projector_b
        logger.debug(f"Projection attempt {attempt + 1} has condition number {condition:.3e}.")
    raise SingularProjectionError(
        f"A Pairs_12 B^T stayed singular after {max_retries} attempts "
        f"(condition number {condition:.3e})."
    )


def multiview_symmetrize(
    moments: MultiViewMoments, projector_a: np.ndarray, projector_b: np.ndarray
) -> MomentSet:
    """
    Reduce three views to exchangeable moments of the third view.

    Pairs_3 = P31 (P12^T)^-1 P23 and
    Triples_3(eta) = P32 P12^-1 T132(eta) P12^-1 P13, where every P and T is
    projected by A on view 1 and by B on view 2.
    """
    projected_12 = projector_a @ moments.pairs[(1, 2)] @ projector_b.T
    if np.linalg.cond(projected_12) > Tolerances.MULTIVIEW_CONDITION_NUMBER:
        raise SingularProjectionError("A Pairs_12 B^T is not invertible.")
    projected_31 = moments.pairs[(3, 1)] @ projector_a.T
    projected_32 = moments.pairs[(3, 2)] @ projector_b.T

    pairs = projected_31 @ np.linalg.solve(projected_12.T, projected_32.T)
    left = np.linalg.solve(projected_12.T, projected_32.T).T
    right = np.linalg.solve(projected_12, projected_31.T)

    def triples_contract(eta: np.ndarray) -> np.ndarray:
        return left @ (projector_a @ moments.triples_132(eta) @ projector_b.T) @ right

    return MomentSet(
        mean=np.zeros(moments.dims[2]),
        pairs=pairs,
        triples_contract=triples_contract,
        provenance=moments.provenance,
    )


def eca_multiview(
    moments: MultiViewMoments,
    k: int,
    theta: Optional[np.ndarray] = None,
    seed: Seed = None,
    gap_tol: float = Tolerances.SINGULAR_VALUE_GAP,
    retries: int = 5,
) -> RecoveryResult:
    """Recover canonical columns of O_3 from three-view moments."""
    rng = get_rng(seed)
    projector_a, projector_b = find_projectors_ab(
        moments.pairs[(1, 2)], moments.pairs[(2, 1)], k, rng
    )
    symmetrized = multiview_symmetrize(moments, projector_a, projector_b)
    return eca_skew(symmetrized, k, theta=theta, gap_tol=gap_tol, seed=rng, retries=retries)

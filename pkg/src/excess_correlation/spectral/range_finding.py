import numpy as np
from loguru import logger
from scipy import linalg

from excess_correlation.constants import Tolerances
from excess_correlation.model.exceptions import RankCollapseError
from excess_correlation.spectral.utilities import Action, Seed, apply_action, get_rng


def randomized_range(
    pairs_action: Action, d: int, k: int, seed: Seed = None, rank_tol: float = Tolerances.RANK
) -> np.ndarray:
    """
    Find an orthonormal basis U for the range of a rank-k pairs matrix.

    The pairs matrix is applied to a d x k Gaussian test matrix and the result
    is orthonormalized with a column-pivoted QR factorization.

    Parameters
    ----------
    pairs_action
        The pairs matrix, a linear operator, or a callable mapping a d x k
        matrix to Pairs times that matrix.
    d
        The observation dimension.
    k
        The number of latent factors.
    seed
        Seed for the Gaussian test matrix.
    rank_tol
        The smallest allowed ratio |r_kk| / |r_11| of the QR factor.

    Returns
    -------
    A d x k matrix with orthonormal columns.
    """
    test_matrix = get_rng(seed).standard_normal((d, k))
    sketch = apply_action(pairs_action, test_matrix)
    basis, upper, _ = linalg.qr(sketch, mode="economic", pivoting=True)

    diagonal = np.abs(np.diag(upper))
    if len(diagonal) < k or diagonal[0] == 0.0 or diagonal[k - 1] < rank_tol * diagonal[0]:
        raise RankCollapseError(
            f"Pairs has numerical rank below k = {k}: pivoted QR diagonal {diagonal}."
        )
    logger.debug(f"Found a rank-{k} range basis in dimension {d}.")
    return basis[:, :k]

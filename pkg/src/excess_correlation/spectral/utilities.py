from typing import Callable, Union

import numpy as np
from scipy import linalg
from scipy.sparse.linalg import LinearOperator

Seed = Union[int, np.random.Generator, np.random.SeedSequence, None]
Action = Union[np.ndarray, LinearOperator, Callable[[np.ndarray], np.ndarray]]


def get_rng(seed: Seed) -> np.random.Generator:
    return np.random.default_rng(seed)


def apply_action(action: Action, vectors: np.ndarray) -> np.ndarray:
    """Apply a matrix, a linear operator or a callable to the columns of a matrix."""
    if isinstance(action, (np.ndarray, LinearOperator)):
        return np.asarray(action @ vectors, dtype=float)
    return np.asarray(action(vectors), dtype=float)


def random_unit_vector(k: int, seed: Seed) -> np.ndarray:
    """A direction drawn uniformly from the unit sphere in R^k."""
    direction = get_rng(seed).standard_normal(k)
    return direction / linalg.norm(direction)


def random_orthonormal_basis(k: int, seed: Seed) -> np.ndarray:
    basis, _ = linalg.qr(get_rng(seed).standard_normal((k, k)))
    return basis


def orthonormalize(vectors: np.ndarray) -> np.ndarray:
    """QR orthonormalization with the sign of each column fixed by R's diagonal."""
    basis, upper = linalg.qr(vectors, mode="economic")
    signs = np.sign(np.diag(upper))
    signs[signs == 0.0] = 1.0
    return basis * signs


def spectral_norm(matrix: np.ndarray) -> float:
    return float(linalg.norm(matrix, 2)) if matrix.size else 0.0


def range_projector(basis: np.ndarray) -> np.ndarray:
    """The orthogonal projector W (W^T W)^{-1} W^T onto the range of W."""
    return basis @ linalg.pinv(basis)

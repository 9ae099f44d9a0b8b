import dataclasses
import enum
from typing import Union

import numpy as np
from scipy import linalg

from excess_correlation.constants import Tolerances
from excess_correlation.model.exceptions import (
    BadColumnNormalizationError,
    DimensionMismatchError,
    RankDeficientError,
)
from excess_correlation.model.factors import DirichletParams, FactorSpec


class TopicMatrixMode(str, enum.Enum):
    CANONICAL = "canonical"
    PROBABILITY_COLUMNS = "probability-columns"
    RAW = "raw"


@dataclasses.dataclass(frozen=True)
class TopicMatrix:
    """
    The d x k conditional mean matrix O with E[x | h] = O h.

    Instances are validated by :func:`make_topic_matrix` and are read-only.
    """

    entries: np.ndarray
    mode: TopicMatrixMode
    sigma_min: float
    sigma_max: float

    @property
    def d(self) -> int:
        return self.entries.shape[0]

    @property
    def k(self) -> int:
        return self.entries.shape[1]

    @property
    def condition_ratio(self) -> float:
        return self.sigma_min / self.sigma_max


def make_topic_matrix(
    entries: Union[np.ndarray, list],
    mode: Union[TopicMatrixMode, str] = TopicMatrixMode.RAW,
    rank_tol: float = Tolerances.RANK,
) -> TopicMatrix:
    """
    Validate a matrix of latent factor loadings.

    Parameters
    ----------
    entries
        A d x k matrix with d >= k. A one-dimensional input is treated as a
        single column.
    mode
        How the columns are normalized.
    rank_tol
        The smallest allowed ratio between the k-th and the first singular
        value.

    Returns
    -------
    A read-only TopicMatrix recording its extreme singular values.
    """
    mode = TopicMatrixMode(mode)
    entries = np.array(entries, dtype=float)
    if entries.ndim == 1:
        entries = entries[:, None]
    if entries.ndim != 2:
        raise DimensionMismatchError(
            f"Topic matrix entries must be two-dimensional, found shape {entries.shape}."
        )

    d, k = entries.shape
    if k == 0 or d < k:
        raise DimensionMismatchError(
            f"Topic matrix must have at least as many rows as columns, found {d} x {k}."
        )
    if not np.all(np.isfinite(entries)):
        raise DimensionMismatchError("Topic matrix entries must be finite.")

    singular_values = linalg.svdvals(entries)
    sigma_max, sigma_min = float(singular_values[0]), float(singular_values[-1])
    if sigma_max == 0.0 or sigma_min / sigma_max < rank_tol:
        raise RankDeficientError(
            f"Topic matrix columns are not linearly independent: sigma_k / sigma_1 = "
            f"{sigma_min / sigma_max if sigma_max else 0.0} < {rank_tol}."
        )

    if mode == TopicMatrixMode.PROBABILITY_COLUMNS:
        column_sums = entries.sum(axis=0)
        if np.any(entries < 0.0) or np.any(
            np.abs(column_sums - 1.0) > Tolerances.COLUMN_SUM
        ):
            raise BadColumnNormalizationError(
                "Probability columns must be non-negative and sum to 1, found column sums "
                f"{column_sums} and minimum entry {entries.min()}."
            )

    entries.flags.writeable = False
    return TopicMatrix(entries, mode, sigma_min, sigma_max)


def fix_column_signs(columns: np.ndarray) -> np.ndarray:
    """Flip each column so that its largest-magnitude entry is positive."""
    columns = np.array(columns, dtype=float)
    if columns.size == 0:
        return columns
    pivot = columns[np.argmax(np.abs(columns), axis=0), np.arange(columns.shape[1])]
    return columns * np.where(pivot < 0.0, -1.0, 1.0)


def canonicalize(
    topics: TopicMatrix, factors: Union[FactorSpec, DirichletParams]
) -> TopicMatrix:
    """
    Rescale the columns of O so that every latent factor has unit variance.

    For independent factors this is O diag(sigma_1, ..., sigma_k); for a
    Dirichlet prior the modified moments give O diag(sqrt(alpha_i)) /
    sqrt((alpha0 + 1) alpha0). Column signs follow the largest-entry-positive
    convention.
    """
    if factors.k != topics.k:
        raise DimensionMismatchError(
            f"Topic matrix has {topics.k} columns but the factors describe {factors.k}."
        )
    scaled = fix_column_signs(topics.entries * factors.standard_deviations)
    return make_topic_matrix(scaled, TopicMatrixMode.CANONICAL, rank_tol=0.0)


def as_matrix(topics: Union[TopicMatrix, np.ndarray]) -> np.ndarray:
    if isinstance(topics, TopicMatrix):
        return topics.entries
    matrix = np.asarray(topics, dtype=float)
    return matrix[:, None] if matrix.ndim == 1 else matrix

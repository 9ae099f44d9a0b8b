import dataclasses
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd
from scipy import linalg
from scipy.optimize import linear_sum_assignment

from excess_correlation.constants import Columns
from excess_correlation.model.exceptions import DimensionMismatchError
from excess_correlation.model.topics import TopicMatrix, as_matrix


@dataclasses.dataclass
class EvalReport:
    """
    How well a set of recovered columns matches the true ones.

    ``permutation[j]`` is the true column matched to recovered column j and
    ``sign_flips[j]`` records whether recovered column j was negated first.
    """

    permutation: List[int]
    sign_flips: List[bool]
    per_column_l2: List[float]
    per_column_l1: List[float]
    max_l2: float
    mean_l2: float
    alpha_error: Optional[float] = None
    moment_errors: Optional[Tuple[float, float]] = None

    @property
    def n_matched(self) -> int:
        return len(self.permutation)

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(
            {
                Columns.RECOVERED_COLUMN: np.arange(self.n_matched),
                Columns.TRUE_COLUMN: self.permutation,
                Columns.SIGN_FLIPPED: self.sign_flips,
                Columns.L2_ERROR: self.per_column_l2,
                Columns.L1_ERROR: self.per_column_l1,
            }
        )

    def to_dict(self) -> Dict[str, Any]:
        record = dataclasses.asdict(self)
        if self.moment_errors is not None:
            record["moment_errors"] = list(self.moment_errors)
        return record


def align_columns(
    true_topics: Union[TopicMatrix, np.ndarray],
    estimated: Union[np.ndarray, Sequence[np.ndarray]],
    allow_sign: bool = False,
    alpha_true: Optional[np.ndarray] = None,
    alpha_hat: Optional[np.ndarray] = None,
) -> EvalReport:
    """
    Match recovered columns to true columns with the assignment of least total
    l2 cost.

    Parameters
    ----------
    true_topics
        The d x k true matrix.
    estimated
        A d x m array or a list of m recovered columns, m <= k.
    allow_sign
        Compare each pair up to a sign flip of the recovered column.
    alpha_true, alpha_hat
        When both are given, the largest absolute error of the permuted prior
        is reported.

    Returns
    -------
    An EvalReport. With no recovered columns the maximum and mean errors are
    infinite.
    """
    truth = as_matrix(true_topics)
    d, k = truth.shape
    if isinstance(estimated, np.ndarray):
        columns = estimated.reshape(d, -1) if estimated.size else np.zeros((d, 0))
    else:
        columns = np.column_stack(estimated) if len(estimated) else np.zeros((d, 0))
    if columns.shape[0] != d:
        raise DimensionMismatchError(
            f"Recovered columns have {columns.shape[0]} rows but the truth has {d}."
        )
    m = columns.shape[1]
    if m > k:
        raise DimensionMismatchError(f"Found {m} recovered columns for {k} true columns.")
    if m == 0:
        return EvalReport([], [], [], [], np.inf, np.inf)

    # cost[j, i] compares recovered column j with true column i
    cost = linalg.norm(truth.T[None, :, :] - columns.T[:, None, :], axis=2)
    flipped = np.zeros_like(cost, dtype=bool)
    if allow_sign:
        negated_cost = linalg.norm(truth.T[None, :, :] + columns.T[:, None, :], axis=2)
        flipped = negated_cost < cost
        cost = np.minimum(cost, negated_cost)
    rows, matches = linear_sum_assignment(cost)

    signs = np.where(flipped[rows, matches], -1.0, 1.0)
    residuals = truth[:, matches] - columns[:, rows] * signs
    l2 = linalg.norm(residuals, axis=0)
    l1 = np.abs(residuals).sum(axis=0)

    alpha_error = None
    if alpha_true is not None and alpha_hat is not None and len(alpha_hat) == m:
        alpha_error = float(
            np.max(np.abs(np.asarray(alpha_true)[matches] - np.asarray(alpha_hat)[rows]))
        )

    return EvalReport(
        permutation=matches.tolist(),
        sign_flips=flipped[rows, matches].tolist(),
        per_column_l2=l2.tolist(),
        per_column_l1=l1.tolist(),
        max_l2=float(l2.max()),
        mean_l2=float(l2.mean()),
        alpha_error=alpha_error,
    )

import dataclasses
import enum
from typing import Any, Dict, Optional

import numpy as np

from excess_correlation.model.topics import TopicMatrix, make_topic_matrix


class RecoveryStatus(str, enum.Enum):
    COMPLETE = "complete"
    NOT_ALL_RECOVERED = "not_all_recovered"
    NOT_CONVERGED = "not_converged"


@dataclasses.dataclass
class RecoveryResult:
    """
    The columns recovered by one run of an ECA algorithm.

    Columns are stored as a d x m array (m <= k), ordered by descending singular
    value; every per-column list is aligned with that order.
    """

    columns: np.ndarray
    singular_values: np.ndarray
    skewness_estimates: np.ndarray
    scale_estimates: np.ndarray
    k: int
    theta_used: Optional[np.ndarray] = None
    alpha_hat: Optional[np.ndarray] = None
    kurtosis_estimates: Optional[np.ndarray] = None
    status: RecoveryStatus = RecoveryStatus.COMPLETE
    diagnostics: Dict[str, Any] = dataclasses.field(default_factory=dict)

    def __post_init__(self):
        self.columns = np.asarray(self.columns, dtype=float).reshape(
            np.shape(self.columns)[0], -1
        )
        order = np.argsort(-np.asarray(self.singular_values, dtype=float), kind="stable")
        self.columns = self.columns[:, order]
        self.singular_values = np.asarray(self.singular_values, dtype=float)[order]
        self.skewness_estimates = np.asarray(self.skewness_estimates, dtype=float)[order]
        self.scale_estimates = np.asarray(self.scale_estimates, dtype=float)[order]
        if self.kurtosis_estimates is not None:
            self.kurtosis_estimates = np.asarray(self.kurtosis_estimates, dtype=float)[order]
        if self.alpha_hat is not None:
            self.alpha_hat = np.asarray(self.alpha_hat, dtype=float)[order]

        if self.n_columns > self.k:
            raise ValueError(f"Recovered {self.n_columns} columns but k = {self.k}.")
        if not np.all(np.isfinite(self.columns)):
            raise ValueError("Recovered columns must be finite.")

    @property
    def n_columns(self) -> int:
        return self.columns.shape[1]

    @property
    def is_complete(self) -> bool:
        return self.n_columns == self.k

    def to_topic_matrix(self) -> TopicMatrix:
        return make_topic_matrix(self.columns)

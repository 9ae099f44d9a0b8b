import dataclasses
import enum
from typing import Any, Callable, Dict, Optional, Union

import numpy as np
from scipy.sparse.linalg import LinearOperator, aslinearoperator

from excess_correlation.model.exceptions import (
    DimensionMismatchError,
    MissingMomentsError,
    NegativeAlpha0Error,
)

Operator = Union[np.ndarray, LinearOperator]
TriplesContract = Callable[[np.ndarray], Operator]
QuadContract = Callable[[np.ndarray, np.ndarray], Operator]


class Provenance(str, enum.Enum):
    ANALYTIC = "analytic"
    EMPIRICAL = "empirical"


def sandwich(basis: np.ndarray, matrix: Operator) -> np.ndarray:
    """Compute basis.T @ matrix @ basis for a dense matrix or a linear operator."""
    return basis.T @ np.asarray(matrix @ basis)


def materialize(matrix: Operator) -> np.ndarray:
    if isinstance(matrix, LinearOperator):
        return np.asarray(matrix @ np.eye(matrix.shape[1]))
    return np.asarray(matrix, dtype=float)


def dirichlet_coefficients(alpha0: float) -> Dict[str, float]:
    """
    Coefficients of the Dirichlet moment modification.

    An alpha0 of 0 gives all-zero coefficients (the non-central moments) and an
    infinite alpha0 gives the central-moment limit; no 0/0 is ever evaluated.
    """
    if alpha0 < 0.0 or np.isnan(alpha0):
        raise NegativeAlpha0Error(f"alpha0 must be non-negative, found {alpha0}.")
    if alpha0 == 0.0:
        return {"pairs": 0.0, "cross": 0.0, "mean": 0.0}
    if np.isinf(alpha0):
        return {"pairs": 1.0, "cross": 1.0, "mean": 2.0}
    return {
        "pairs": alpha0 / (alpha0 + 1.0),
        "cross": alpha0 / (alpha0 + 2.0),
        "mean": 2.0 * alpha0**2 / ((alpha0 + 2.0) * (alpha0 + 1.0)),
    }


@dataclasses.dataclass(frozen=True)
class MomentSet:
    """
    Low-order moments of an exchangeable model.

    ``pairs`` is either a dense d x d matrix or a LinearOperator evaluating
    v -> Pairs v. ``triples_contract(eta)`` returns Triples(eta) and
    ``quad_contract(eta, eta2)`` returns Quad(eta, eta2); both may return dense
    matrices or linear operators. ``raw`` marks non-central moments, which the
    ECA algorithms center or modify before use.
    """

    mean: np.ndarray
    pairs: Operator
    triples_contract: TriplesContract
    provenance: Provenance = Provenance.ANALYTIC
    quad_contract: Optional[QuadContract] = None
    n_samples: Optional[int] = None
    raw: bool = False
    diagnostics: Dict[str, Any] = dataclasses.field(default_factory=dict, compare=False)

    def __post_init__(self):
        mean = np.asarray(self.mean, dtype=float).reshape(-1)
        d = len(mean)
        if self.pairs.shape != (d, d):
            raise DimensionMismatchError(
                f"Pairs must be {d} x {d} to match the mean, found {self.pairs.shape}."
            )
        if not isinstance(self.pairs, LinearOperator):
            pairs = np.asarray(self.pairs, dtype=float)
            object.__setattr__(self, "pairs", (pairs + pairs.T) / 2.0)
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "provenance", Provenance(self.provenance))

    ##############
    # Properties #
    ##############

    @property
    def d(self) -> int:
        return len(self.mean)

    @property
    def has_quad(self) -> bool:
        return self.quad_contract is not None

    @property
    def dense_pairs(self) -> np.ndarray:
        return materialize(self.pairs)

    ##################
    # Moment oracles #
    ##################

    def pairs_action(self, vectors: np.ndarray) -> np.ndarray:
        return np.asarray(self.pairs @ vectors)

    def triples(self, eta: np.ndarray) -> Operator:
        return self.triples_contract(self._check_direction(eta))

    def quad(self, eta: np.ndarray, eta2: np.ndarray) -> Operator:
        if self.quad_contract is None:
            raise MissingMomentsError("These moments carry no fourth-order contraction.")
        return self.quad_contract(self._check_direction(eta), self._check_direction(eta2))

    ###################
    # Transformations #
    ###################

    def project(self, basis: np.ndarray) -> "MomentSet":
        """
        Express every moment in the coordinates of a d x m basis W.

        The projected pairs are W^T Pairs W and the projected contraction of
        theta is W^T Triples(W theta) W.
        """
        basis = np.asarray(basis, dtype=float)
        if basis.ndim != 2 or basis.shape[0] != self.d:
            raise DimensionMismatchError(
                f"Projection basis must have {self.d} rows, found shape {basis.shape}."
            )

        def triples_contract(theta: np.ndarray) -> np.ndarray:
            return sandwich(basis, self.triples(basis @ theta))

        quad_contract = None
        if self.quad_contract is not None:

            def quad_contract(theta: np.ndarray, theta2: np.ndarray) -> np.ndarray:
                return sandwich(basis, self.quad(basis @ theta, basis @ theta2))

        return MomentSet(
            mean=basis.T @ self.mean,
            pairs=sandwich(basis, self.pairs),
            triples_contract=triples_contract,
            provenance=self.provenance,
            quad_contract=quad_contract,
            n_samples=self.n_samples,
            raw=self.raw,
            diagnostics=self.diagnostics,
        )

    def modified(self, alpha0: float) -> "MomentSet":
        """
        Apply the Dirichlet moment modification for a concentration alpha0.

        Pairs become Pairs - alpha0 / (alpha0 + 1) mu mu^T and each third-order
        contraction has the cross terms with the mean removed. Fourth-order
        moments are not modified and are dropped unless alpha0 is infinite, in
        which case the result holds central moments. Dense pairs stay dense;
        operator pairs stay operators.
        """
        coefficients = dirichlet_coefficients(alpha0)
        mean = self.mean
        raw_pairs = self.pairs

        if coefficients["pairs"] == 0.0:
            pairs = raw_pairs
        elif isinstance(raw_pairs, LinearOperator):
            pairs = raw_pairs - _outer_operator(coefficients["pairs"] * mean, mean)
        else:
            pairs = raw_pairs - coefficients["pairs"] * np.outer(mean, mean)

        def triples_contract(eta: np.ndarray) -> Operator:
            raw_triples = self.triples(eta)
            if coefficients["cross"] == 0.0:
                return raw_triples
            pairs_eta = np.asarray(raw_pairs @ eta)
            eta_mean = float(eta @ mean)
            if isinstance(raw_triples, LinearOperator) or isinstance(
                raw_pairs, LinearOperator
            ):
                return (
                    _as_operator(raw_triples)
                    - coefficients["cross"] * eta_mean * _as_operator(raw_pairs)
                    - _outer_operator(coefficients["cross"] * pairs_eta, mean)
                    - _outer_operator(coefficients["cross"] * mean, pairs_eta)
                    + _outer_operator(coefficients["mean"] * eta_mean * mean, mean)
                )
            return (
                raw_triples
                - coefficients["cross"]
                * (
                    np.outer(pairs_eta, mean)
                    + np.outer(mean, pairs_eta)
                    + eta_mean * raw_pairs
                )
                + coefficients["mean"] * eta_mean * np.outer(mean, mean)
            )

        central = bool(np.isinf(alpha0))
        return MomentSet(
            mean=mean,
            pairs=pairs,
            triples_contract=triples_contract,
            provenance=self.provenance,
            quad_contract=self.quad_contract if central else None,
            n_samples=self.n_samples,
            raw=False,
            diagnostics={**self.diagnostics, "alpha0": alpha0},
        )

    def centered(self) -> "MomentSet":
        """Central moments; the infinite-concentration limit of :meth:`modified`."""
        if not self.raw:
            return self
        return self.modified(np.inf)

    ##################
    # Helper methods #
    ##################

    def _check_direction(self, eta: np.ndarray) -> np.ndarray:
        eta = np.asarray(eta, dtype=float)
        if eta.shape != (self.d,):
            raise DimensionMismatchError(
                f"Contraction direction must have shape ({self.d},), found {eta.shape}."
            )
        return eta


def _as_operator(matrix: Operator) -> LinearOperator:
    if isinstance(matrix, LinearOperator):
        return matrix
    return aslinearoperator(matrix)


def _outer_operator(left: np.ndarray, right: np.ndarray) -> LinearOperator:
    """The rank-one operator left right^T."""
    left, right = np.asarray(left, dtype=float), np.asarray(right, dtype=float)
    return LinearOperator(
        shape=(len(left), len(right)),
        matvec=lambda v: left * (right @ v),
        rmatvec=lambda v: right * (left @ v),
        matmat=lambda m: np.outer(left, right @ m),
        dtype=float,
    )

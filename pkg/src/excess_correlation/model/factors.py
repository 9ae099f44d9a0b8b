import dataclasses
from typing import Any, Optional, Sequence

import numpy as np

from excess_correlation.model.exceptions import (
    InvalidDirichletParamsError,
    InvalidFactorSpecError,
)


def _frozen(values: Sequence[float]) -> np.ndarray:
    array = np.array(values, dtype=float).reshape(-1)
    array.flags.writeable = False
    return array


@dataclasses.dataclass(frozen=True)
class FactorSpec:
    """
    Central moments of k independent latent factors.

    Parameters
    ----------
    variances
        The variance of each factor, all strictly positive.
    third_moments
        The third central moment of each factor.
    fourth_moments
        The fourth central moment of each factor. Must be at least the squared
        variance.
    mean
        Optional mean of the latent vector, only used when building raw moments.
    """

    variances: np.ndarray
    third_moments: np.ndarray
    fourth_moments: np.ndarray
    mean: Optional[np.ndarray] = None

    def __post_init__(self):
        variances = _frozen(self.variances)
        third_moments = _frozen(self.third_moments)
        fourth_moments = _frozen(self.fourth_moments)

        if not variances.shape == third_moments.shape == fourth_moments.shape:
            raise InvalidFactorSpecError(
                "Variances, third moments and fourth moments must all have one entry "
                f"per factor, but found {len(variances)}, {len(third_moments)} and "
                f"{len(fourth_moments)}."
            )
        if np.any(variances <= 0.0):
            raise InvalidFactorSpecError(
                f"Factor variances must be strictly positive, but found {variances}."
            )
        # The fourth central moment is bounded below by the squared variance
        if np.any(fourth_moments < variances**2 * (1.0 - 1e-12)):
            raise InvalidFactorSpecError(
                "Fourth central moments must be at least the squared variances, but "
                f"found {fourth_moments} < {variances ** 2}."
            )

        object.__setattr__(self, "variances", variances)
        object.__setattr__(self, "third_moments", third_moments)
        object.__setattr__(self, "fourth_moments", fourth_moments)
        if self.mean is not None:
            mean = _frozen(self.mean)
            if mean.shape != variances.shape:
                raise InvalidFactorSpecError(
                    f"Factor mean must have {len(variances)} entries, found {len(mean)}."
                )
            object.__setattr__(self, "mean", mean)

    @classmethod
    def from_distributions(cls, distributions: Sequence[Any]) -> "FactorSpec":
        """Build a FactorSpec from frozen scipy.stats distributions, one per factor."""
        mean, variance, skewness, kurtosis = (
            np.array(values, dtype=float)
            for values in zip(
                *(distribution.stats(moments="mvsk") for distribution in distributions)
            )
        )
        standard_deviation = np.sqrt(variance)
        return cls(
            variances=variance,
            third_moments=skewness * standard_deviation**3,
            fourth_moments=(kurtosis + 3.0) * variance**2,
            mean=mean,
        )

    ##############
    # Properties #
    ##############

    @property
    def k(self) -> int:
        return len(self.variances)

    @property
    def standard_deviations(self) -> np.ndarray:
        return np.sqrt(self.variances)

    @property
    def skewness(self) -> np.ndarray:
        return self.third_moments / self.standard_deviations**3

    @property
    def excess_kurtosis(self) -> np.ndarray:
        return self.fourth_moments / self.variances**2 - 3.0

    @property
    def fourth_cumulants(self) -> np.ndarray:
        return self.fourth_moments - 3.0 * self.variances**2


@dataclasses.dataclass(frozen=True)
class DirichletParams:
    """Concentration parameters of a Dirichlet prior over topic proportions."""

    alpha: np.ndarray

    def __post_init__(self):
        alpha = _frozen(self.alpha)
        if alpha.size == 0 or np.any(~np.isfinite(alpha)) or np.any(alpha <= 0.0):
            raise InvalidDirichletParamsError(
                f"Dirichlet parameters must be finite and strictly positive, found {alpha}."
            )
        object.__setattr__(self, "alpha", alpha)

    ##############
    # Properties #
    ##############

    @property
    def k(self) -> int:
        return len(self.alpha)

    @property
    def alpha0(self) -> float:
        return float(np.sum(self.alpha))

    @property
    def pmin(self) -> float:
        return float(np.min(self.alpha) / self.alpha0)

    @property
    def mean(self) -> np.ndarray:
        return self.alpha / self.alpha0

    @property
    def effective_skewness(self) -> np.ndarray:
        alpha0 = self.alpha0
        return 2.0 * np.sqrt(alpha0 * (alpha0 + 1.0) / ((alpha0 + 2.0) ** 2 * self.alpha))

    @property
    def standard_deviations(self) -> np.ndarray:
        """Scales that put the modified Dirichlet moments in canonical form."""
        return np.sqrt(self.alpha / ((self.alpha0 + 1.0) * self.alpha0))

    def effective_factors(self) -> FactorSpec:
        """
        The modified Dirichlet moments written as independent factor moments.

        Only the second and third moments are meaningful; the fourth moment is
        set to the Gaussian value.
        """
        alpha0 = self.alpha0
        variances = self.alpha / ((alpha0 + 1.0) * alpha0)
        return FactorSpec(
            variances=variances,
            third_moments=2.0 * self.alpha / ((alpha0 + 2.0) * (alpha0 + 1.0) * alpha0),
            fourth_moments=3.0 * variances**2,
            mean=self.mean,
        )

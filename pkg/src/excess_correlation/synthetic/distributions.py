from typing import Any, Sequence

import numpy as np
from scipy import stats

from excess_correlation.model.exceptions import InvalidFactorSpecError


def signed_bernoulli(p: float) -> Any:
    """
    Return a frozen distribution on {-1, +1} with P(+1) = p.

    Its skewness is (1 - 2p) / sqrt(p (1 - p)) and its excess kurtosis is
    1 / (p (1 - p)) - 6, so p = 1/2 gives the symmetric Rademacher variable.
    """
    if not 0.0 < p < 1.0:
        raise InvalidFactorSpecError(f"Probability must lie strictly in (0, 1), found {p}.")
    return stats.rv_discrete(values=([-1, 1], [1.0 - p, p]))


def rademacher() -> Any:
    return signed_bernoulli(0.5)


def bernoulli(p: float) -> Any:
    """Return a frozen distribution on {0, 1} with P(1) = p."""
    if not 0.0 < p < 1.0:
        raise InvalidFactorSpecError(f"Probability must lie strictly in (0, 1), found {p}.")
    return stats.bernoulli(p)


def centered_uniform() -> Any:
    """Uniform on [-1, 1]: no skew and excess kurtosis -6/5."""
    return stats.uniform(loc=-1.0, scale=2.0)


def distribution_ppf(quantiles: np.ndarray, distributions: Sequence[Any]) -> np.ndarray:
    """
    Return the inverse cumulative distribution function of each factor.

    Parameters
    ----------
    quantiles
        An n x k array of quantiles, one column per factor.
    distributions
        The k frozen scipy.stats distributions.

    Returns
    -------
    An n x k array of factor values.
    """
    quantiles = np.atleast_2d(np.asarray(quantiles, dtype=float))
    if quantiles.shape[1] != len(distributions):
        raise ValueError(
            f"Found {quantiles.shape[1]} quantile columns for {len(distributions)} factors."
        )
    return np.column_stack(
        [distribution.ppf(quantiles[:, i]) for i, distribution in enumerate(distributions)]
    )


def sample_factors(
    distributions: Sequence[Any], n: int, rng: np.random.Generator
) -> np.ndarray:
    """Draw n independent samples of k independent factors as an n x k array."""
    return distribution_ppf(rng.random((n, len(distributions))), distributions)

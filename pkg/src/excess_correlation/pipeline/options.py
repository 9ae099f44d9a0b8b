import dataclasses
import enum
from typing import Any, Dict, Optional

from vivarium.config_tree import ConfigurationError

from excess_correlation.constants import Tolerances
from excess_correlation.moments.accumulator import EstimatorMode


class SvdMethod(str, enum.Enum):
    DENSE = "dense"
    POWER_ITERATION = "power_iteration"


@dataclasses.dataclass(frozen=True)
class FitOptions:
    """Settings of one empirical LDA fit."""

    CONFIGURATION_DEFAULTS = {
        "fit": {
            "k": 5,
            "alpha0": 0.0,
            "svd_method": SvdMethod.DENSE.value,
            "theta_retries": 5,
            "clip_normalize": False,
            "clip_fraction": 0.01,
            "max_iter": 1_000,
            "conv_tol": 1e-10,
            "gap_tol": Tolerances.SINGULAR_VALUE_GAP,
        }
    }

    k: int
    alpha0: float = 0.0
    seed: Optional[int] = None
    svd_method: SvdMethod = SvdMethod.DENSE
    theta_retries: int = 5
    clip_normalize: bool = False
    clip_fraction: float = 0.01
    max_iter: int = 1_000
    conv_tol: float = 1e-10
    gap_tol: float = Tolerances.SINGULAR_VALUE_GAP
    estimator_mode: EstimatorMode = EstimatorMode.ALL_DISTINCT_TRIPLES
    dense_pairs_cap: int = 20_000

    def __post_init__(self):
        object.__setattr__(self, "svd_method", SvdMethod(self.svd_method))
        object.__setattr__(self, "estimator_mode", EstimatorMode(self.estimator_mode))
        for name in ("alpha0", "clip_fraction", "conv_tol", "gap_tol"):
            object.__setattr__(self, name, float(getattr(self, name)))
        if self.k < 1:
            raise ConfigurationError(f"k must be at least 1, found {self.k}.", "k")
        if self.alpha0 < 0.0:
            raise ConfigurationError(
                f"alpha0 must be non-negative, found {self.alpha0}.", "alpha0"
            )
        if not 0.0 <= self.clip_fraction < 1.0:
            raise ConfigurationError(
                f"clip_fraction must lie in [0, 1), found {self.clip_fraction}.",
                "clip_fraction",
            )
        if self.theta_retries < 1 or self.max_iter < 1:
            raise ConfigurationError(
                "theta_retries and max_iter must both be at least 1.", "theta_retries"
            )

    def to_dict(self) -> Dict[str, Any]:
        options = dataclasses.asdict(self)
        options["svd_method"] = self.svd_method.value
        options["estimator_mode"] = self.estimator_mode.value
        return options

"""
Embedding of a three-step factorial HMM into the multi-view model.

Each factor is a two-state chain on {-1, +1} that leaves +1 with probability
``leave_positive`` and leaves -1 with probability ``leave_negative``. Given the
middle state h2 every conditional expectation is affine in h2:

    E[h3 | h2] = (b - a) + (1 - a - b) h2
    E[h1 | h2] = c1 + s1 h2    (by Bayes' rule from the initial law)

so E[x_t | h2] = O_t h2 + shift_t with O_t = O diag(s_t) and shift_t = O c_t.
"""
import dataclasses
from typing import Any, List, Sequence

import numpy as np

from excess_correlation.model.exceptions import InvalidTransitionError
from excess_correlation.model.factors import FactorSpec
from excess_correlation.model.topics import TopicMatrix, as_matrix, make_topic_matrix
from excess_correlation.moments.multiview import MultiViewMoments, exact_multiview_moments
from excess_correlation.synthetic.distributions import signed_bernoulli
from excess_correlation.synthetic.generators import SampledViews


@dataclasses.dataclass(frozen=True)
class FactorialHmmEmbedding:
    observation: np.ndarray
    initial: np.ndarray
    leave_positive: np.ndarray
    leave_negative: np.ndarray
    view_topics: List[np.ndarray]
    shifts: List[np.ndarray]
    middle_positive: np.ndarray
    noise_scale: float = 0.0

    @property
    def k(self) -> int:
        return self.observation.shape[1]

    @property
    def distributions(self) -> List[Any]:
        """The laws of the middle state h2, one per factor."""
        return [signed_bernoulli(p) for p in self.middle_positive]

    def factors(self) -> FactorSpec:
        return FactorSpec.from_distributions(self.distributions)

    def topic_matrices(self) -> List[TopicMatrix]:
        return [make_topic_matrix(topics) for topics in self.view_topics]

    def moments(self) -> MultiViewMoments:
        return exact_multiview_moments(*self.view_topics, self.factors())

    def sample(self, n: int, rng: np.random.Generator) -> SampledViews:
        """Simulate n chains of three steps and emit x_t = O h_t + noise."""
        states = [np.where(rng.random((n, self.k)) < self.initial, 1.0, -1.0)]
        for _ in range(2):
            previous = states[-1]
            leave = np.where(previous > 0.0, self.leave_positive, self.leave_negative)
            states.append(np.where(rng.random((n, self.k)) < leave, -previous, previous))

        views = []
        for state in states:
            means = state @ self.observation.T
            views.append(means + self.noise_scale * rng.standard_normal(means.shape))
        return SampledViews(states[1], views)


def embed_factorial_hmm(
    leave_positive: Sequence[float],
    leave_negative: Sequence[float],
    observation: np.ndarray,
    initial: Sequence[float],
    horizon: int = 3,
    noise_scale: float = 0.0,
) -> FactorialHmmEmbedding:
    """
    Build the view matrices O_1, O_2, O_3 and mean shifts of a factorial HMM
    conditioned on its middle state.

    Parameters
    ----------
    leave_positive
        Per-factor probability of moving from +1 to -1.
    leave_negative
        Per-factor probability of moving from -1 to +1.
    observation
        The d x k emission matrix O with E[x_t | h_t] = O h_t.
    initial
        Per-factor probability that h1 = +1.
    horizon
        Number of time steps; only three-step chains embed into three views.
    noise_scale
        Standard deviation of the Gaussian emission noise.
    """
    if horizon != 3:
        raise ValueError(f"Only three-step chains can be embedded, found horizon {horizon}.")
    observation = as_matrix(observation)
    a, b, initial = (
        np.asarray(values, dtype=float).reshape(-1)
        for values in (leave_positive, leave_negative, initial)
    )
    k = observation.shape[1]
    for name, values in (("leave_positive", a), ("leave_negative", b), ("initial", initial)):
        if values.shape != (k,):
            raise InvalidTransitionError(
                f"{name} must have {k} entries, found {len(values)}."
            )
        if np.any(values < 0.0) or np.any(values > 1.0) or np.any(~np.isfinite(values)):
            raise InvalidTransitionError(f"{name} must be probabilities, found {values}.")

    middle_positive = initial * (1.0 - a) + (1.0 - initial) * b
    if np.any(middle_positive <= 0.0) or np.any(middle_positive >= 1.0):
        raise InvalidTransitionError(
            f"The middle state must take both signs, found P(h2 = +1) = {middle_positive}."
        )

    # E[h1 | h2 = +1] and E[h1 | h2 = -1]
    given_positive = 2.0 * initial * (1.0 - a) / middle_positive - 1.0
    given_negative = 2.0 * initial * a / (1.0 - middle_positive) - 1.0
    first_scale = (given_positive - given_negative) / 2.0
    first_shift = (given_positive + given_negative) / 2.0

    last_scale = 1.0 - a - b
    last_shift = b - a

    return FactorialHmmEmbedding(
        observation=observation,
        initial=initial,
        leave_positive=a,
        leave_negative=b,
        view_topics=[observation * first_scale, observation.copy(), observation * last_scale],
        shifts=[
            observation @ first_shift,
            np.zeros(observation.shape[0]),
            observation @ last_shift,
        ],
        middle_positive=middle_positive,
        noise_scale=noise_scale,
    )

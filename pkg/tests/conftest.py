import numpy as np
import pytest

from excess_correlation.model import DirichletParams
from tests.instances import gaussian_topics, stochastic_topics


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20_231)


@pytest.fixture
def lda_instance(rng):
    """A well-conditioned LDA model with d = 20 and k = 4."""
    return stochastic_topics(20, 4, rng), DirichletParams([0.3, 0.7, 1.1, 0.9])


@pytest.fixture
def gaussian_instance(rng):
    return gaussian_topics(12, 4, rng)

import dataclasses
import enum
from typing import Any, Dict, List, Optional, Tuple, Union

import numpy as np
from loguru import logger
from vivarium.config_tree import ConfigurationError

from excess_correlation.model.corpus import Corpus
from excess_correlation.model.factors import DirichletParams, FactorSpec
from excess_correlation.model.topics import TopicMatrix, make_topic_matrix
from excess_correlation.moments.dirichlet import lda_raw_moments
from excess_correlation.moments.exact import exact_moments
from excess_correlation.moments.moment_set import MomentSet
from excess_correlation.moments.multiview import MultiViewMoments, exact_multiview_moments
from excess_correlation.spectral.utilities import Seed, get_rng
from excess_correlation.synthetic.distributions import bernoulli
from excess_correlation.synthetic.generators import (
    SampledViews,
    generate_independent_factor_samples,
    generate_lda_corpus,
    generate_multiview,
    random_topic_matrix,
)
from excess_correlation.synthetic.hmm import FactorialHmmEmbedding, embed_factorial_hmm


class GeneratorModel(str, enum.Enum):
    LDA = "lda"
    GAUSSIAN_HYPERCUBE = "independent-gaussian-hypercube"
    POISSON = "independent-poisson"
    MULTI_VIEW = "multi-view"
    FACTORIAL_HMM = "factorial-hmm"


@dataclasses.dataclass(frozen=True)
class GeneratorSpec:
    """
    Settings of a synthetic model.

    ``alpha`` defaults to 1/k per topic and ``probabilities`` (the Bernoulli
    factor probabilities, or the initial P(h1 = +1) of the factorial HMM) to k
    values evenly spaced in [0.1, 0.4].
    """

    CONFIGURATION_DEFAULTS = {
        "generator": {
            "model": GeneratorModel.LDA.value,
            "d": 50,
            "k": 5,
            "n": 10_000,
            "doc_len": 3,
            "topic_concentration": 0.1,
            "noise_scale": 0.0,
            "views": 3,
            "flip_probability": 0.1,
        }
    }

    model: GeneratorModel = GeneratorModel.LDA
    d: int = 50
    k: int = 5
    n: int = 10_000
    doc_len: int = 3
    alpha: Optional[List[float]] = None
    topic_concentration: Optional[float] = 0.1
    probabilities: Optional[List[float]] = None
    noise_scale: float = 0.0
    views: int = 3
    flip_probability: float = 0.1
    seed: Optional[int] = None

    def __post_init__(self):
        try:
            object.__setattr__(self, "model", GeneratorModel(self.model))
        except ValueError:
            raise ConfigurationError(
                f"Unknown generator model '{self.model}'; use one of "
                f"{[model.value for model in GeneratorModel]}.",
                "model",
            )
        if self.k < 1 or self.d < self.k:
            raise ConfigurationError(f"Need 1 <= k <= d, found k={self.k}, d={self.d}.", "k")
        if self.n < 1:
            raise ConfigurationError(f"n must be positive, found {self.n}.", "n")
        if self.model == GeneratorModel.LDA and self.doc_len < 3:
            raise ConfigurationError(
                f"LDA documents need at least 3 tokens, found {self.doc_len}.", "doc_len"
            )
        if self.views not in (3, 4):
            raise ConfigurationError(f"views must be 3 or 4, found {self.views}.", "views")
        if self.noise_scale < 0.0:
            raise ConfigurationError("noise_scale must be non-negative.", "noise_scale")
        if not 0.0 <= self.flip_probability <= 1.0:
            raise ConfigurationError(
                f"flip_probability must lie in [0, 1], found {self.flip_probability}.",
                "flip_probability",
            )
        if self.alpha is not None:
            alpha = [float(value) for value in self.alpha]
            if len(alpha) != self.k or min(alpha) <= 0.0:
                raise ConfigurationError(
                    f"alpha must hold {self.k} positive values, found {alpha}.", "alpha"
                )
            object.__setattr__(self, "alpha", alpha)
        if self.probabilities is not None:
            probabilities = [float(value) for value in self.probabilities]
            if len(probabilities) != self.k or not all(0.0 < p < 1.0 for p in probabilities):
                raise ConfigurationError(
                    f"probabilities must hold {self.k} values in (0, 1), found {probabilities}.",
                    "probabilities",
                )
            object.__setattr__(self, "probabilities", probabilities)

    ##############
    # Properties #
    ##############

    @property
    def dirichlet(self) -> DirichletParams:
        alpha = self.alpha if self.alpha is not None else np.full(self.k, 1.0 / self.k)
        return DirichletParams(np.asarray(alpha, dtype=float))

    @property
    def factor_probabilities(self) -> np.ndarray:
        if self.probabilities is not None:
            return np.asarray(self.probabilities, dtype=float)
        return np.linspace(0.1, 0.4, self.k)

    def to_dict(self) -> Dict[str, Any]:
        spec = dataclasses.asdict(self)
        spec["model"] = self.model.value
        return spec


@dataclasses.dataclass(frozen=True)
class GroundTruth:
    """The true parameters of a synthetic model and a sampler for it."""

    spec: GeneratorSpec
    topics: List[TopicMatrix]
    dirichlet: Optional[DirichletParams] = None
    distributions: Optional[List[Any]] = None
    embedding: Optional[FactorialHmmEmbedding] = None

    @property
    def factors(self) -> Union[FactorSpec, DirichletParams]:
        if self.dirichlet is not None:
            return self.dirichlet
        if self.embedding is not None:
            return self.embedding.factors()
        return FactorSpec.from_distributions(self.distributions)

    @property
    def shifts(self) -> Optional[List[np.ndarray]]:
        return self.embedding.shifts if self.embedding is not None else None

    def moments(self) -> Union[MomentSet, MultiViewMoments]:
        """
        Analytic moments of the model: raw moments for LDA, central moments for
        the independent-factor models and cross-view moments otherwise.
        """
        model = self.spec.model
        if model == GeneratorModel.LDA:
            return lda_raw_moments(self.topics[0], self.dirichlet)
        if model in (GeneratorModel.GAUSSIAN_HYPERCUBE, GeneratorModel.POISSON):
            return exact_moments(self.topics[0], self.factors)
        if model == GeneratorModel.FACTORIAL_HMM:
            return self.embedding.moments()
        return exact_multiview_moments(*self.topics, self.factors)

    def sample(self, n: int, rng: np.random.Generator) -> Union[Corpus, SampledViews]:
        model = self.spec.model
        if model == GeneratorModel.LDA:
            return generate_lda_corpus(
                self.topics[0], self.dirichlet, n, self.spec.doc_len, rng
            )
        if model == GeneratorModel.FACTORIAL_HMM:
            return self.embedding.sample(n, rng)
        if model == GeneratorModel.MULTI_VIEW:
            return generate_multiview(
                self.topics, self.distributions, n, rng, noise_scale=self.spec.noise_scale
            )
        noise_model = "poisson" if model == GeneratorModel.POISSON else "gaussian"
        return generate_independent_factor_samples(
            self.topics[0],
            self.distributions,
            noise_model,
            n,
            self.spec.views,
            rng,
            noise_scale=self.spec.noise_scale,
        )


def build_ground_truth(spec: GeneratorSpec, seed: Seed = None) -> GroundTruth:
    """Draw the true parameters of the model named by ``spec``."""
    rng = get_rng(spec.seed if seed is None else seed)
    d, k = spec.d, spec.k
    model = spec.model
    logger.debug(f"Building a {model.value} ground truth with d={d}, k={k}.")

    if model == GeneratorModel.LDA:
        topics = random_topic_matrix(d, k, rng, spec.topic_concentration)
        return GroundTruth(spec, [topics], dirichlet=spec.dirichlet)

    distributions = [bernoulli(p) for p in spec.factor_probabilities]
    if model == GeneratorModel.GAUSSIAN_HYPERCUBE:
        topics = make_topic_matrix(rng.standard_normal((d, k)))
        return GroundTruth(spec, [topics], distributions=distributions)
    if model == GeneratorModel.POISSON:
        topics = make_topic_matrix(2.0 * rng.random((d, k)))
        return GroundTruth(spec, [topics], distributions=distributions)
    if model == GeneratorModel.MULTI_VIEW:
        topics = [make_topic_matrix(rng.standard_normal((d, k))) for _ in range(3)]
        return GroundTruth(spec, topics, distributions=distributions)

    flips = np.full(k, spec.flip_probability)
    embedding = embed_factorial_hmm(
        flips,
        flips,
        rng.standard_normal((d, k)),
        spec.factor_probabilities,
        noise_scale=spec.noise_scale,
    )
    return GroundTruth(spec, embedding.topic_matrices(), embedding=embedding)


def generate_samples(
    spec: GeneratorSpec, seed: Seed = None
) -> Tuple[GroundTruth, Union[Corpus, SampledViews]]:
    """
    Build the ground truth and draw ``spec.n`` samples from it.

    The ground truth and the samples use independent streams spawned from one
    seed, so the same seed always yields the same parameters and samples.
    """
    truth_seed, sample_seed = np.random.SeedSequence(
        spec.seed if seed is None else seed
    ).spawn(2)
    truth = build_ground_truth(spec, truth_seed)
    return truth, truth.sample(spec.n, np.random.default_rng(sample_seed))

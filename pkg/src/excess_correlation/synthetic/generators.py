from typing import Any, List, NamedTuple, Optional, Sequence, Union

import numpy as np
from loguru import logger

from excess_correlation.model.corpus import Corpus
from excess_correlation.model.exceptions import DimensionMismatchError, NegativeRateError
from excess_correlation.model.factors import DirichletParams
from excess_correlation.model.topics import (
    TopicMatrix,
    TopicMatrixMode,
    as_matrix,
    make_topic_matrix,
)
from excess_correlation.synthetic.distributions import sample_factors

Topics = Union[TopicMatrix, np.ndarray]

NOISE_MODELS = ("gaussian", "poisson")


class SampledViews(NamedTuple):
    factors: np.ndarray
    views: List[np.ndarray]


def sample_dirichlet(params: DirichletParams, rng: np.random.Generator) -> np.ndarray:
    """One draw of topic proportions from Dir(alpha)."""
    return rng.dirichlet(params.alpha)


def random_topic_matrix(
    d: int,
    k: int,
    rng: np.random.Generator,
    concentration: Optional[float] = 0.1,
) -> TopicMatrix:
    """
    A d x k column-stochastic topic matrix with Dirichlet(concentration)
    columns, or normalized uniform columns when concentration is None.
    """
    if concentration is None:
        entries = rng.random((d, k))
        entries /= entries.sum(axis=0)
    else:
        entries = rng.dirichlet(np.full(d, concentration), size=k).T
        entries /= entries.sum(axis=0)
    return make_topic_matrix(entries, TopicMatrixMode.PROBABILITY_COLUMNS)


def generate_lda_corpus(
    topics: Topics,
    params: DirichletParams,
    n_docs: int,
    doc_len: int,
    rng: np.random.Generator,
) -> Corpus:
    """
    Sample documents from an LDA model.

    Each document draws h ~ Dir(alpha), then for every token a topic from h and
    a word from that topic's column. Both inverse-CDF lookups are vectorized by
    offsetting each row's cumulative distribution by its row index.
    """
    if doc_len < 3:
        raise ValueError(f"Documents need at least 3 tokens, found doc_len = {doc_len}.")
    matrix = as_matrix(topics)
    d, k = matrix.shape
    if k != params.k:
        raise DimensionMismatchError(f"Topic matrix has {k} topics but alpha has {params.k}.")

    proportions = rng.dirichlet(params.alpha, size=n_docs)
    topic_ids = _sample_categorical(proportions, rng.random((n_docs, doc_len)))
    word_ids = _sample_categorical(matrix.T, rng.random((n_docs, doc_len)), rows=topic_ids)
    logger.debug(f"Generated {n_docs} LDA documents of {doc_len} tokens over {d} words.")
    return Corpus.from_tokens(list(word_ids), d)


def generate_independent_factor_samples(
    topics: Topics,
    distributions: Sequence[Any],
    noise_model: str,
    n: int,
    views: int,
    rng: np.random.Generator,
    noise_scale: float = 0.0,
) -> SampledViews:
    """
    Sample exchangeable views x_v with E[x_v | h] = O h.

    The factors are drawn once per sample from the product distribution; each
    view then adds Gaussian noise of scale ``noise_scale`` or draws Poisson
    counts with rates O h.
    """
    if views not in (3, 4):
        raise ValueError(f"Exchangeable samples have 3 or 4 views, found {views}.")
    matrix = as_matrix(topics)
    return generate_multiview(
        [matrix] * views,
        distributions,
        n,
        rng,
        noise_model=noise_model,
        noise_scale=noise_scale,
    )


def generate_multiview(
    view_topics: Sequence[Topics],
    distributions: Sequence[Any],
    n: int,
    rng: np.random.Generator,
    noise_model: str = "gaussian",
    noise_scale: float = 0.0,
) -> SampledViews:
    """Sample views x_v with E[x_v | h] = O_v h sharing one draw of h per sample."""
    if noise_model not in NOISE_MODELS:
        raise ValueError(f"Unknown noise model '{noise_model}'; use one of {NOISE_MODELS}.")
    matrices = [as_matrix(topics) for topics in view_topics]
    for matrix in matrices:
        if matrix.shape[1] != len(distributions):
            raise DimensionMismatchError(
                f"A view has {matrix.shape[1]} columns but there are {len(distributions)} "
                "factors."
            )

    factors = sample_factors(distributions, n, rng)
    views = []
    for matrix in matrices:
        means = factors @ matrix.T
        if noise_model == "poisson":
            if np.any(means < 0.0):
                raise NegativeRateError("Poisson rates O h must be non-negative.")
            views.append(rng.poisson(means).astype(float))
        else:
            views.append(means + noise_scale * rng.standard_normal(means.shape))
    return SampledViews(factors, views)


def _sample_categorical(
    probabilities: np.ndarray, uniforms: np.ndarray, rows: Optional[np.ndarray] = None
) -> np.ndarray:
    """
    Invert the cumulative distribution of a row of ``probabilities`` at every
    uniform draw. Row i of the uniforms uses row i of the probabilities unless
    ``rows`` selects one row per draw.
    """
    n_rows, n_categories = probabilities.shape
    cumulative = np.cumsum(probabilities, axis=1)
    cumulative[:, -1] = 1.0
    offsets = np.arange(n_rows)
    if rows is None:
        rows = np.broadcast_to(offsets[:, None], uniforms.shape)
    flat = (cumulative + offsets[:, None]).ravel()
    positions = np.searchsorted(flat, rows + uniforms, side="right") - rows * n_categories
    return np.minimum(positions, n_categories - 1)

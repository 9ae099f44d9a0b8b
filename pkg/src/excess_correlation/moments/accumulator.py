import dataclasses
import enum
from typing import List, Optional

import numpy as np
from loguru import logger
from scipy import sparse
from scipy.sparse.linalg import LinearOperator

from excess_correlation.model.corpus import Corpus
from excess_correlation.model.exceptions import (
    DimensionMismatchError,
    EmptyAccumulatorError,
    EmptyCorpusError,
    MissingMomentsError,
    OptionsMismatchError,
)
from excess_correlation.moments.moment_set import MomentSet, Operator, Provenance
from excess_correlation.moments.samples import sample_moments


class EstimatorMode(str, enum.Enum):
    ALL_DISTINCT_TRIPLES = "all-distinct-triples"
    FIRST_THREE_TOKENS = "first-three-tokens"


@dataclasses.dataclass(frozen=True, eq=False)
class MomentOptions:
    """
    Parameters
    ----------
    estimator
        Whether each document contributes every ordered triple of distinct
        token positions or only its first three tokens.
    fourth_order
        Also estimate the fourth-order contraction from the first four tokens.
    dense_pairs_cap
        The largest vocabulary for which pairs are kept as a dense matrix.
    projection
        A d x m basis; when given, only projected statistics are accumulated.
    """

    CONFIGURATION_DEFAULTS = {
        "moments": {
            "estimator": EstimatorMode.ALL_DISTINCT_TRIPLES.value,
            "dense_pairs_cap": 20_000,
        }
    }

    estimator: EstimatorMode = EstimatorMode.ALL_DISTINCT_TRIPLES
    fourth_order: bool = False
    dense_pairs_cap: int = 20_000
    projection: Optional[np.ndarray] = None

    def __post_init__(self):
        object.__setattr__(self, "estimator", EstimatorMode(self.estimator))
        if self.projection is not None:
            projection = np.array(self.projection, dtype=float)
            projection.flags.writeable = False
            object.__setattr__(self, "projection", projection)

    @property
    def min_document_length(self) -> int:
        return 4 if self.fourth_order else 3

    def matches(self, other: "MomentOptions") -> bool:
        if (self.projection is None) != (other.projection is None):
            return False
        return (
            self.estimator == other.estimator
            and self.fourth_order == other.fourth_order
            and self.dense_pairs_cap == other.dense_pairs_cap
            and (
                self.projection is None
                or np.array_equal(self.projection, other.projection)
            )
        )


@dataclasses.dataclass
class MomentAccumulator:
    """
    Running sums of per-document moment estimates.

    Without a projection the used count rows are kept so that any third-order
    contraction can be evaluated after the pass; with a projection only m x m
    and m x m x m sums are kept.
    """

    d: int
    options: MomentOptions
    n_docs: int = 0
    n_skipped: int = 0
    first_sum: Optional[np.ndarray] = None
    pairs_sum: Optional[np.ndarray] = None
    count_blocks: List[sparse.csr_matrix] = dataclasses.field(default_factory=list)
    length_blocks: List[np.ndarray] = dataclasses.field(default_factory=list)
    quad_blocks: List[np.ndarray] = dataclasses.field(default_factory=list)
    projected_pairs_sum: Optional[np.ndarray] = None
    projected_triples_sum: Optional[np.ndarray] = None

    def __post_init__(self):
        if self.first_sum is None:
            self.first_sum = np.zeros(self.dimension)
        if self.options.projection is not None:
            if self.options.projection.shape[0] != self.d:
                raise DimensionMismatchError(
                    f"Projection has {self.options.projection.shape[0]} rows but d = {self.d}."
                )
            m = self.dimension
            if self.projected_pairs_sum is None:
                self.projected_pairs_sum = np.zeros((m, m))
            if self.projected_triples_sum is None:
                self.projected_triples_sum = np.zeros((m, m, m))
        elif self.pairs_sum is None and self.keeps_dense_pairs:
            self.pairs_sum = np.zeros((self.d, self.d))

    @classmethod
    def empty(cls, d: int, options: Optional[MomentOptions] = None) -> "MomentAccumulator":
        return cls(d, options if options is not None else MomentOptions())

    ##############
    # Properties #
    ##############

    @property
    def dimension(self) -> int:
        """The dimension of the accumulated statistics: m when projected, else d."""
        projection = self.options.projection
        return self.d if projection is None else projection.shape[1]

    @property
    def keeps_dense_pairs(self) -> bool:
        return self.options.projection is None and self.d <= self.options.dense_pairs_cap

    ##################
    # Public methods #
    ##################

    def merge(self, other: "MomentAccumulator") -> "MomentAccumulator":
        """Combine two accumulators built with the same d and options."""
        if other.d != self.d or not self.options.matches(other.options):
            raise OptionsMismatchError(
                "Only accumulators with the same vocabulary size and options can be merged."
            )
        return MomentAccumulator(
            d=self.d,
            options=self.options,
            n_docs=self.n_docs + other.n_docs,
            n_skipped=self.n_skipped + other.n_skipped,
            first_sum=self.first_sum + other.first_sum,
            pairs_sum=_add(self.pairs_sum, other.pairs_sum),
            count_blocks=self.count_blocks + other.count_blocks,
            length_blocks=self.length_blocks + other.length_blocks,
            quad_blocks=self.quad_blocks + other.quad_blocks,
            projected_pairs_sum=_add(self.projected_pairs_sum, other.projected_pairs_sum),
            projected_triples_sum=_add(
                self.projected_triples_sum, other.projected_triples_sum
            ),
        )

    def finalize(self) -> MomentSet:
        """
        Average the accumulated sums into a raw (non-central) MomentSet.

        The result lives in the projected coordinates when a projection was
        used.
        """
        if self.n_docs == 0:
            raise EmptyAccumulatorError("Cannot finalize an accumulator with no documents.")
        n_docs = self.n_docs
        diagnostics = {"n_docs": n_docs, "n_skipped": self.n_skipped, "d": self.d}

        if self.options.projection is not None:
            triples_sum = self.projected_triples_sum / n_docs
            return MomentSet(
                mean=self.first_sum / n_docs,
                pairs=self.projected_pairs_sum / n_docs,
                triples_contract=lambda theta: np.einsum("abc,c->ab", triples_sum, theta),
                provenance=Provenance.EMPIRICAL,
                n_samples=n_docs,
                raw=True,
                diagnostics=diagnostics,
            )

        counts = sparse.vstack(self.count_blocks).tocsr()
        lengths = np.concatenate(self.length_blocks).astype(float)
        pair_weights = 1.0 / (lengths * (lengths - 1.0))
        triple_weights = pair_weights / (lengths - 2.0)
        dense = self.keeps_dense_pairs

        if dense:
            pairs = self.pairs_sum / n_docs
        else:
            pairs = _pairs_operator(counts, pair_weights, n_docs)

        def triples_contract(eta: np.ndarray) -> Operator:
            return _triples_contraction(counts, triple_weights, eta, n_docs, dense)

        quad_contract = None
        if self.options.fourth_order:
            quad_contract = self._views_moments().quad_contract

        return MomentSet(
            mean=self.first_sum / n_docs,
            pairs=pairs,
            triples_contract=triples_contract,
            provenance=Provenance.EMPIRICAL,
            quad_contract=quad_contract,
            n_samples=n_docs,
            raw=True,
            diagnostics=diagnostics,
        )

    ##################
    # Helper methods #
    ##################

    def _views_moments(self) -> MomentSet:
        positions = np.vstack(self.quad_blocks)
        rows = np.arange(len(positions))
        views = [
            sparse.csr_matrix(
                (np.ones(len(positions)), (rows, positions[:, view])),
                shape=(len(positions), self.d),
            )
            for view in range(4)
        ]
        return sample_moments(views)


def accumulate(corpus: Corpus, options: Optional[MomentOptions] = None) -> MomentAccumulator:
    """
    Accumulate unbiased per-document moment estimates over a corpus.

    Documents shorter than three tokens (four when fourth-order moments are
    requested) are skipped and counted.
    """
    options = options if options is not None else MomentOptions()
    lengths = corpus.document_lengths
    qualifying = lengths >= options.min_document_length
    n_skipped = int((~qualifying).sum())
    if not qualifying.any():
        raise EmptyCorpusError(
            f"No document has at least {options.min_document_length} tokens "
            f"({corpus.n_docs} documents given)."
        )
    if n_skipped:
        logger.debug(f"Skipping {n_skipped} documents shorter than the estimator allows.")

    needs_tokens = (
        options.estimator == EstimatorMode.FIRST_THREE_TOKENS or options.fourth_order
    )
    if needs_tokens and corpus.tokens is None:
        raise MissingMomentsError(
            "Ordered tokens are needed for first-token and fourth-order estimates."
        )

    used = np.flatnonzero(qualifying)
    if options.estimator == EstimatorMode.FIRST_THREE_TOKENS:
        counts = _leading_token_counts([corpus.tokens[i] for i in used], 3, corpus.d)
        lengths = np.full(len(used), 3, dtype=np.int64)
    else:
        counts = corpus.counts[used]
        lengths = lengths[used]

    accumulator = MomentAccumulator(corpus.d, options, n_docs=len(used), n_skipped=n_skipped)
    document_weights = 1.0 / lengths
    pair_weights = 1.0 / (lengths * (lengths - 1.0))
    triple_weights = pair_weights / (lengths - 2.0)

    if options.projection is not None:
        projection = options.projection
        projected = np.asarray(counts @ projection)
        accumulator.first_sum = projected.T @ document_weights
        accumulator.projected_pairs_sum = _projected_pairs(
            counts, projected, projection, pair_weights
        )
        accumulator.projected_triples_sum = _projected_triples(
            counts, projected, projection, triple_weights
        )
    else:
        accumulator.first_sum = np.asarray(counts.T @ document_weights).ravel()
        if accumulator.keeps_dense_pairs:
            accumulator.pairs_sum = _dense_pairs(counts, pair_weights)
        accumulator.count_blocks = [counts]
        accumulator.length_blocks = [lengths]

    if options.fourth_order:
        accumulator.quad_blocks = [np.vstack([corpus.tokens[i][:4] for i in used])]

    return accumulator


def _add(first: Optional[np.ndarray], second: Optional[np.ndarray]) -> Optional[np.ndarray]:
    if first is None or second is None:
        return first if second is None else second
    return first + second


def _leading_token_counts(
    tokens: List[np.ndarray], n_tokens: int, d: int
) -> sparse.csr_matrix:
    leading = np.vstack([document[:n_tokens] for document in tokens])
    rows = np.repeat(np.arange(len(leading)), n_tokens)
    return sparse.csr_matrix(
        (np.ones(leading.size), (rows, leading.ravel())), shape=(len(leading), d)
    )


def _dense_pairs(counts: sparse.csr_matrix, pair_weights: np.ndarray) -> np.ndarray:
    """Sum over documents of (c c^T - diag(c)) / (L (L - 1))."""
    weighted = sparse.diags(pair_weights) @ counts
    pairs = (counts.T @ weighted).toarray()
    pairs[np.diag_indices_from(pairs)] -= np.asarray(weighted.sum(axis=0)).ravel()
    return pairs


def _pairs_operator(
    counts: sparse.csr_matrix, pair_weights: np.ndarray, n_docs: int
) -> LinearOperator:
    diagonal = np.asarray(counts.T @ pair_weights).ravel()

    def matmat(vectors: np.ndarray) -> np.ndarray:
        vectors = np.asarray(vectors, dtype=float).reshape(counts.shape[1], -1)
        cross = counts.T @ (pair_weights[:, None] * (counts @ vectors))
        return (cross - diagonal[:, None] * vectors) / n_docs

    d = counts.shape[1]
    return LinearOperator(
        shape=(d, d),
        matvec=lambda v: matmat(v).ravel(),
        rmatvec=lambda v: matmat(v).ravel(),
        matmat=matmat,
        dtype=float,
    )


def _triples_contraction(
    counts: sparse.csr_matrix,
    triple_weights: np.ndarray,
    eta: np.ndarray,
    n_docs: int,
    dense: bool,
) -> Operator:
    """
    Sum over documents of the ordered distinct-position triples contracted with
    eta, divided by L (L - 1) (L - 2):
    c c^T <eta, c> - diag(c) <eta, c> - (c * eta) c^T - c (c * eta)^T + 2 diag(c * eta).
    """
    d = counts.shape[1]
    doc_weights = triple_weights * np.asarray(counts @ eta).ravel()
    weighted_eta_counts = sparse.csr_matrix(counts.multiply(eta[None, :])).T @ sparse.diags(
        triple_weights
    )
    diagonal = np.asarray(counts.T @ doc_weights).ravel() - 2.0 * eta * np.asarray(
        counts.T @ triple_weights
    ).ravel()

    if dense:
        full = (counts.T @ sparse.diags(doc_weights) @ counts).toarray()
        mixed = (weighted_eta_counts @ counts).toarray()
        result = full - mixed - mixed.T
        result[np.diag_indices(d)] -= diagonal
        return result / n_docs

    def matmat(vectors: np.ndarray) -> np.ndarray:
        vectors = np.asarray(vectors, dtype=float).reshape(d, -1)
        counts_vectors = counts @ vectors
        full = counts.T @ (doc_weights[:, None] * counts_vectors)
        mixed = weighted_eta_counts @ counts_vectors
        mixed_transposed = counts.T @ (weighted_eta_counts.T @ vectors)
        return (full - mixed - mixed_transposed - diagonal[:, None] * vectors) / n_docs

    return LinearOperator(
        shape=(d, d),
        matvec=lambda v: matmat(v).ravel(),
        rmatvec=lambda v: matmat(v).ravel(),
        matmat=matmat,
        dtype=float,
    )


def _projected_pairs(
    counts: sparse.csr_matrix,
    projected: np.ndarray,
    projection: np.ndarray,
    pair_weights: np.ndarray,
) -> np.ndarray:
    word_weights = np.asarray(counts.T @ pair_weights).ravel()
    return projected.T @ (pair_weights[:, None] * projected) - (
        projection.T * word_weights
    ) @ projection


def _projected_triples(
    counts: sparse.csr_matrix,
    projected: np.ndarray,
    projection: np.ndarray,
    triple_weights: np.ndarray,
) -> np.ndarray:
    """
    Sum over documents of W^T S(W theta) W written as an m x m x m tensor whose
    last index is contracted with theta.
    """
    entries = counts.tocoo()
    rows, words = entries.row, entries.col
    entry_weights = triple_weights[rows] * entries.data
    word_rows = projection[words]

    full = np.einsum("n,na,nb,nc->abc", triple_weights, projected, projected, projected)
    repeated = np.einsum(
        "n,na,nb,nc->abc", entry_weights, word_rows, word_rows, projected[rows]
    )
    same_word = np.einsum("n,na,nb,nc->abc", entry_weights, word_rows, word_rows, word_rows)
    return (
        full
        - repeated
        - np.einsum("acb->abc", repeated)
        - np.einsum("bca->abc", repeated)
        + 2.0 * same_word
    )

import dataclasses
from typing import Dict, List, Optional, Sequence

import numpy as np
from scipy import sparse

from excess_correlation.model.exceptions import (
    CountNonPositiveError,
    DimensionMismatchError,
    IndexOutOfRangeError,
)


@dataclasses.dataclass(frozen=True)
class Corpus:
    """
    A collection of documents over a vocabulary of size d.

    Parameters
    ----------
    d
        The vocabulary size.
    counts
        An n_docs x d sparse matrix of word counts.
    tokens
        The ordered token ids of each document, when known.
    vocabulary
        The word for each token id, when known.
    """

    d: int
    counts: sparse.csr_matrix
    tokens: Optional[List[np.ndarray]] = None
    vocabulary: Optional[List[str]] = None

    def __post_init__(self):
        counts = sparse.csr_matrix(self.counts, dtype=np.int64)
        counts.sum_duplicates()
        counts.eliminate_zeros()
        if counts.shape[1] != self.d:
            raise DimensionMismatchError(
                f"Count matrix has {counts.shape[1]} columns but the vocabulary has {self.d}."
            )
        if counts.nnz and counts.data.min() < 1:
            raise CountNonPositiveError("Every word count must be at least 1.")
        object.__setattr__(self, "counts", counts)

        if self.tokens is not None:
            if len(self.tokens) != counts.shape[0]:
                raise DimensionMismatchError(
                    f"Found token sequences for {len(self.tokens)} documents but counts for "
                    f"{counts.shape[0]}."
                )
        if self.vocabulary is not None and len(self.vocabulary) != self.d:
            raise DimensionMismatchError(
                f"Vocabulary has {len(self.vocabulary)} words but d = {self.d}."
            )

    ################
    # Constructors #
    ################

    @classmethod
    def from_tokens(
        cls, tokens: Sequence[Sequence[int]], d: int, vocabulary: Optional[List[str]] = None
    ) -> "Corpus":
        """Build a corpus from ordered token ids, one sequence per document."""
        tokens = [np.asarray(document, dtype=np.int64) for document in tokens]
        for document in tokens:
            if document.size and (document.min() < 0 or document.max() >= d):
                raise IndexOutOfRangeError(
                    f"Token ids must lie in [0, {d}), found {document.min()}..{document.max()}."
                )
        lengths = np.array([len(document) for document in tokens], dtype=np.int64)
        rows = np.repeat(np.arange(len(tokens)), lengths)
        columns = np.concatenate(tokens) if tokens else np.zeros(0, dtype=np.int64)
        counts = sparse.coo_matrix(
            (np.ones(len(columns), dtype=np.int64), (rows, columns)), shape=(len(tokens), d)
        )
        return cls(d, counts.tocsr(), tokens=tokens, vocabulary=vocabulary)

    @classmethod
    def from_documents(
        cls,
        documents: Sequence[Dict[int, int]],
        d: int,
        vocabulary: Optional[List[str]] = None,
    ) -> "Corpus":
        """Build a corpus from sparse count dictionaries (token id -> count)."""
        rows, columns, data = [], [], []
        for row, document in enumerate(documents):
            for token, count in document.items():
                if not 0 <= token < d:
                    raise IndexOutOfRangeError(f"Token id {token} is outside [0, {d}).")
                if count < 1:
                    raise CountNonPositiveError(f"Token {token} has count {count} < 1.")
                rows.append(row)
                columns.append(token)
                data.append(count)
        counts = sparse.coo_matrix((data, (rows, columns)), shape=(len(documents), d))
        return cls(d, counts.tocsr(), vocabulary=vocabulary)

    ##############
    # Properties #
    ##############

    @property
    def n_docs(self) -> int:
        return self.counts.shape[0]

    @property
    def document_lengths(self) -> np.ndarray:
        return np.asarray(self.counts.sum(axis=1)).ravel()

    ##################
    # Helper methods #
    ##################

    def document(self, index: int) -> Dict[int, int]:
        row = self.counts[index]
        return dict(zip(row.indices.tolist(), row.data.tolist()))

    def concatenate(self, other: "Corpus") -> "Corpus":
        if other.d != self.d:
            raise DimensionMismatchError(
                f"Cannot join corpora with vocabulary sizes {self.d} and {other.d}."
            )
        tokens = (
            self.tokens + other.tokens
            if self.tokens is not None and other.tokens is not None
            else None
        )
        return Corpus(
            self.d,
            sparse.vstack([self.counts, other.counts]).tocsr(),
            tokens=tokens,
            vocabulary=self.vocabulary,
        )

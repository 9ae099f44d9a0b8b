"""
Readers and writers for the UCI bag-of-words format.

A docword file holds three header lines (the number of documents D, the
vocabulary size W and the number of non-zero entries NNZ) followed by NNZ
lines ``docID wordID count`` with 1-based ids. The vocab file holds one token
per line.
"""
from pathlib import Path
from typing import Iterator, List, Optional, Tuple, Union

import numpy as np
import pandas as pd
from loguru import logger
from scipy import sparse

from excess_correlation.constants import Columns
from excess_correlation.model.corpus import Corpus
from excess_correlation.model.exceptions import (
    CountNonPositiveError,
    IndexOutOfRangeError,
    MalformedHeaderError,
    VocabLengthMismatchError,
)

PathLike = Union[str, Path]

HEADER_LINES = 3
CHUNK_SIZE = 1_000_000


def read_uci_bagofwords(
    docword_path: PathLike,
    vocab_path: Optional[PathLike] = None,
    chunk_size: int = CHUNK_SIZE,
) -> Corpus:
    """
    Parse a docword file (and optionally its vocabulary) into a Corpus.

    Entries are read ``chunk_size`` lines at a time. Ids are converted to 0-based
    indices; repeated (docID, wordID) lines are summed.
    """
    docword_path = Path(docword_path)
    n_docs, n_words, n_nonzero = _read_header(docword_path)
    counts = sparse.csr_matrix((n_docs, n_words), dtype=np.int64)
    n_read = 0
    for entries in _read_entries(docword_path, chunk_size):
        _check_entries(entries, n_docs, n_words)
        rows, columns = entries[Columns.DOC_ID] - 1, entries[Columns.WORD_ID] - 1
        counts += sparse.csr_matrix(
            (entries[Columns.COUNT].to_numpy(), (rows.to_numpy(), columns.to_numpy())),
            shape=(n_docs, n_words),
        )
        n_read += len(entries)
    if n_read != n_nonzero:
        raise MalformedHeaderError(
            f"Header declares {n_nonzero} entries but {docword_path} holds {n_read}."
        )

    vocabulary = None
    if vocab_path is not None:
        vocabulary = read_vocabulary(vocab_path)
        if len(vocabulary) != n_words:
            raise VocabLengthMismatchError(
                f"Vocabulary has {len(vocabulary)} words but the header declares {n_words}."
            )
    logger.info(f"Read {n_docs} documents over {n_words} words from {docword_path}.")
    return Corpus(n_words, counts, vocabulary=vocabulary)


def write_uci_bagofwords(
    corpus: Corpus, docword_path: PathLike, vocab_path: Optional[PathLike] = None
) -> None:
    counts = corpus.counts.tocoo()
    order = np.lexsort((counts.col, counts.row))
    entries = pd.DataFrame(
        {
            Columns.DOC_ID: counts.row[order] + 1,
            Columns.WORD_ID: counts.col[order] + 1,
            Columns.COUNT: counts.data[order],
        }
    )
    with Path(docword_path).open("w") as docword_file:
        docword_file.write(f"{corpus.n_docs}\n{corpus.d}\n{len(entries)}\n")
        entries.to_csv(docword_file, sep=" ", header=False, index=False)

    if vocab_path is not None:
        vocabulary = corpus.vocabulary or default_vocabulary(corpus.d)
        Path(vocab_path).write_text("".join(f"{word}\n" for word in vocabulary))


def read_vocabulary(vocab_path: PathLike) -> List[str]:
    with Path(vocab_path).open() as vocab_file:
        return [line.rstrip("\n") for line in vocab_file if line.strip()]


def default_vocabulary(d: int) -> List[str]:
    return [f"word_{index}" for index in range(d)]


def _read_header(docword_path: Path) -> Tuple[int, int, int]:
    with docword_path.open() as docword_file:
        lines = [docword_file.readline() for _ in range(HEADER_LINES)]
    try:
        header = tuple(int(line.strip()) for line in lines)
    except ValueError:
        raise MalformedHeaderError(
            f"{docword_path} must start with three integer lines D, W and NNZ."
        )
    if min(header) < 0:
        raise MalformedHeaderError(f"Header values must be non-negative, found {header}.")
    return header


def _read_entries(docword_path: Path, chunk_size: int) -> Iterator[pd.DataFrame]:
    try:
        with pd.read_csv(
            docword_path,
            sep=r"\s+",
            header=None,
            names=[Columns.DOC_ID, Columns.WORD_ID, Columns.COUNT],
            skiprows=HEADER_LINES,
            dtype=np.int64,
            chunksize=chunk_size,
        ) as reader:
            yield from reader
    except pd.errors.EmptyDataError:
        return
    except ValueError as error:
        raise MalformedHeaderError(
            f"Entries of {docword_path} must be 'docID wordID count' triplets: {error}"
        )


def _check_entries(entries: pd.DataFrame, n_docs: int, n_words: int) -> None:
    for column, limit in ((Columns.DOC_ID, n_docs), (Columns.WORD_ID, n_words)):
        ids = entries[column]
        if len(ids) and (ids.min() < 1 or ids.max() > limit):
            raise IndexOutOfRangeError(
                f"Column {column} must lie in [1, {limit}], found {ids.min()}..{ids.max()}."
            )
    if len(entries) and entries[Columns.COUNT].min() < 1:
        raise CountNonPositiveError(
            f"Counts must be positive, found {entries[Columns.COUNT].min()}."
        )

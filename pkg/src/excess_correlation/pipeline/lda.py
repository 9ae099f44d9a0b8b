from typing import Any, Dict, Tuple

import numpy as np
from loguru import logger
from vivarium.config_tree import ConfigurationError

from excess_correlation.algorithms.diagonalization import add_new_vectors, diagonalize
from excess_correlation.algorithms.lda import recover_alpha
from excess_correlation.constants import Tolerances
from excess_correlation.model.corpus import Corpus
from excess_correlation.model.exceptions import AllZeroAfterClipError
from excess_correlation.model.results import RecoveryResult, RecoveryStatus
from excess_correlation.moments.accumulator import MomentOptions, accumulate
from excess_correlation.moments.moment_set import MomentSet
from excess_correlation.pipeline.options import FitOptions, SvdMethod
from excess_correlation.spectral import WhiteningMap, power_iteration_svd, truncated_whiten


def fit_lda(corpus: Corpus, options: FitOptions) -> RecoveryResult:
    """
    Fit an LDA topic matrix to a corpus from its empirical moments.

    The corpus is read twice. The first pass estimates the mean and pairs and
    whitens the modified pairs with their top-k singular directions; the second
    accumulates the third-order statistics already projected on the whitening,
    so no d x d x d object is formed. The whitened third moment is then
    diagonalized and every singular vector v is mapped back to a topic
    (W^+)^T v / Z with Z = 2 / ((alpha0 + 2) v^T T(v) v).

    Parameters
    ----------
    corpus
        The documents to fit.
    options
        The fit settings; every random draw derives from ``options.seed``.

    Returns
    -------
    A RecoveryResult holding the topics, the scale of each topic and, when all
    k topics were recovered, the estimated Dirichlet parameters.
    """
    whitening_seed, fit_seed = np.random.SeedSequence(options.seed).spawn(2)
    moment_options = MomentOptions(
        estimator=options.estimator_mode, dense_pairs_cap=options.dense_pairs_cap
    )

    logger.info(f"Estimating pairs from {corpus.n_docs} documents (d = {corpus.d}).")
    raw = accumulate(corpus, moment_options).finalize()
    pairs_alpha0 = raw.modified(options.alpha0).pairs
    whitening = truncated_whiten(
        pairs_alpha0, options.k, np.random.default_rng(whitening_seed)
    )

    logger.info("Accumulating whitened third moments.")
    projected_options = MomentOptions(
        estimator=options.estimator_mode,
        dense_pairs_cap=options.dense_pairs_cap,
        projection=whitening.whitening,
    )
    whitened = accumulate(corpus, projected_options).finalize()
    return _fit_whitened(
        whitened, whitening, pairs_alpha0, options, fit_seed, raw.diagnostics
    )


def fit_lda_from_moments(raw: MomentSet, options: FitOptions) -> RecoveryResult:
    """
    Run the empirical LDA fit on a given set of raw moments, for example exact
    ones, projecting them on the whitening in place of the second pass.
    """
    whitening_seed, fit_seed = np.random.SeedSequence(options.seed).spawn(2)
    pairs_alpha0 = raw.modified(options.alpha0).pairs
    whitening = truncated_whiten(
        pairs_alpha0, options.k, np.random.default_rng(whitening_seed)
    )
    whitened = raw.project(whitening.whitening)
    return _fit_whitened(
        whitened, whitening, pairs_alpha0, options, fit_seed, raw.diagnostics
    )


def clip_normalize(column: np.ndarray, clip_fraction: float = 0.01) -> np.ndarray:
    """
    Project a recovered topic onto the probability simplex.

    Entries are zeroed in increasing order of magnitude while the removed mass
    stays within clip_fraction of the column's l1 norm; negative entries are
    then zeroed and the column is divided by its sum.
    """
    if not 0.0 <= clip_fraction < 1.0:
        raise ConfigurationError(
            f"clip_fraction must lie in [0, 1), found {clip_fraction}.", "clip_fraction"
        )
    clipped = np.array(column, dtype=float)
    magnitudes = np.abs(clipped)
    order = np.argsort(magnitudes, kind="stable")
    removable = np.cumsum(magnitudes[order]) <= clip_fraction * magnitudes.sum()
    clipped[order[removable]] = 0.0
    clipped[clipped < 0.0] = 0.0

    total = clipped.sum()
    if not total > 0.0:
        raise AllZeroAfterClipError("No positive mass is left after clipping.")
    return clipped / total


def _fit_whitened(
    whitened_raw: MomentSet,
    whitening: WhiteningMap,
    pairs_alpha0: Any,
    options: FitOptions,
    seed: np.random.SeedSequence,
    moment_diagnostics: Dict[str, Any],
) -> RecoveryResult:
    """Diagonalize the k-dimensional whitened moments and rescale the topics."""
    alpha0, k = options.alpha0, options.k
    whitened = whitened_raw.modified(alpha0)
    rng = np.random.default_rng(seed)

    diagnostics = {
        **moment_diagnostics,
        "whitening_residual": whitening.residual,
        "svd_method": options.svd_method.value,
    }
    status = RecoveryStatus.COMPLETE
    theta_used = None
    if options.svd_method == SvdMethod.POWER_ITERATION:
        extraction = power_iteration_svd(
            lambda vector: whitened.triples(vector) @ vector,
            k,
            rng,
            max_iter=options.max_iter,
            conv_tol=options.conv_tol,
            gap_tol=options.gap_tol,
        )
        found, found_values = [], []
        add_new_vectors(found, found_values, extraction.vectors, extraction.values, k)
        vectors = np.column_stack(found) if found else np.zeros((k, 0))
        values = np.array(found_values, dtype=float)
        diagnostics.update(converged=extraction.converged, n_iter=extraction.n_iter)
        if not extraction.converged:
            status = RecoveryStatus.NOT_CONVERGED
    else:
        diagonalization = diagonalize(
            whitened.triples, k, None, 1, rng, options.gap_tol, options.theta_retries
        )
        vectors, values = diagonalization.vectors, diagonalization.values
        theta_used = diagonalization.thetas[0][0]
        diagnostics["singular_value_gaps"] = diagonalization.min_gaps

    columns, vectors, scales, kept = _rescale(whitening, whitened, vectors, alpha0)
    diagnostics["unreliable_columns"] = [
        index for index in range(len(values)) if index not in kept
    ]
    values = values[kept]

    alpha_hat = None
    if columns.shape[1] == k:
        alpha_hat = recover_alpha(columns, pairs_alpha0, alpha0)
    if options.clip_normalize and columns.shape[1]:
        columns = np.column_stack(
            [clip_normalize(column, options.clip_fraction) for column in columns.T]
        )
    if status == RecoveryStatus.COMPLETE and columns.shape[1] < k:
        status = RecoveryStatus.NOT_ALL_RECOVERED
    logger.info(f"Recovered {columns.shape[1]} of {k} topics ({status.value}).")

    return RecoveryResult(
        columns=columns,
        singular_values=values,
        skewness_estimates=np.array([v @ whitened.triples(v) @ v for v in vectors.T]),
        scale_estimates=scales,
        k=k,
        theta_used=theta_used,
        alpha_hat=alpha_hat,
        status=status,
        diagnostics=diagnostics,
    )


def _rescale(
    whitening: WhiteningMap, whitened: MomentSet, vectors: np.ndarray, alpha0: float
) -> Tuple[np.ndarray, np.ndarray, np.ndarray, list]:
    """
    Divide (W^+)^T v by Z = 2 / ((alpha0 + 2) v^T T(v) v); the sign of Z fixes
    the sign of the topic. Columns with a vanishing cubic form are unreliable
    and dropped.
    """
    columns, kept_vectors, scales, kept = [], [], [], []
    for index, vector in enumerate(vectors.T):
        cubic = float(vector @ whitened.triples(vector) @ vector)
        if abs(cubic) <= Tolerances.SCALE_DENOMINATOR:
            logger.warning(f"Dropping topic {index}: its scale cannot be estimated.")
            continue
        scale = 2.0 / ((alpha0 + 2.0) * cubic)
        sign = np.sign(scale)
        columns.append(whitening.reconstruct(vector) / scale)
        kept_vectors.append(sign * vector)
        scales.append(abs(scale))
        kept.append(index)

    k = vectors.shape[0]
    if not columns:
        return np.zeros((whitening.d, 0)), np.zeros((k, 0)), np.zeros(0), kept
    return np.column_stack(columns), np.column_stack(kept_vectors), np.array(scales), kept

import dataclasses
from typing import Callable, Iterable, Optional, Tuple, Union

import numpy as np
import pandas as pd
from loguru import logger
from scipy import stats

from excess_correlation.constants import Columns
from excess_correlation.evaluation.alignment import align_columns
from excess_correlation.model.corpus import Corpus
from excess_correlation.model.exceptions import EcaError
from excess_correlation.model.results import RecoveryResult
from excess_correlation.model.topics import TopicMatrix, canonicalize
from excess_correlation.pipeline.lda import fit_lda
from excess_correlation.pipeline.options import FitOptions
from excess_correlation.spectral.utilities import Seed
from excess_correlation.synthetic.generators import SampledViews
from excess_correlation.synthetic.specification import (
    GeneratorModel,
    GeneratorSpec,
    GroundTruth,
    build_ground_truth,
)

Fitter = Callable[[Union[Corpus, SampledViews], FitOptions], RecoveryResult]

# Two-sided 95% normal quantile
CONFIDENCE_QUANTILE = 1.96


@dataclasses.dataclass
class SweepResult:
    table: pd.DataFrame
    trials: pd.DataFrame
    slope: float
    intercept: float
    truth: GroundTruth


def sample_complexity_sweep(
    generator: GeneratorSpec,
    sample_sizes: Iterable[int],
    trials: int,
    options: FitOptions,
    fitter: Optional[Fitter] = None,
    seed: Seed = None,
) -> SweepResult:
    """
    Measure how the aligned column error of a fit shrinks with the sample size.

    One ground truth is drawn for the whole sweep. Every (N, trial) pair then
    samples its own data and fits it with seeds derived from ``seed`` (or the
    generator's seed), so a sweep is reproducible run for run.

    Parameters
    ----------
    generator
        The synthetic model; its ``n`` is ignored.
    sample_sizes
        The numbers of documents (or samples) to try.
    trials
        The number of independent fits per sample size.
    options
        Options passed to the fitter; each trial replaces the seed.
    fitter
        Maps a sample and options to a RecoveryResult. Defaults to
        :func:`fit_lda`, which needs an LDA generator.

    Returns
    -------
    A SweepResult whose table holds the median, quartiles and a 95% confidence
    half-width of the largest column error at each N, plus the least-squares
    slope of log(median error) against log(N).
    """
    sample_sizes = [int(n) for n in sample_sizes]
    if trials < 1 or not sample_sizes:
        raise ValueError("A sweep needs at least one sample size and one trial.")
    if fitter is None:
        if generator.model != GeneratorModel.LDA:
            raise ValueError(f"No default fitter for the {generator.model.value} model.")
        fitter = fit_lda

    truth_seed, trials_seed = np.random.SeedSequence(
        generator.seed if seed is None else seed
    ).spawn(2)
    truth = build_ground_truth(generator, truth_seed)
    reference, allow_sign = reference_topics(truth)
    trial_seeds = trials_seed.spawn(len(sample_sizes) * trials)

    records = []
    for size_index, n in enumerate(sample_sizes):
        for trial in range(trials):
            sample_seed, fit_seed = trial_seeds[size_index * trials + trial].spawn(2)
            sample = truth.sample(n, np.random.default_rng(sample_seed))
            trial_options = dataclasses.replace(
                options, seed=int(fit_seed.generate_state(1)[0])
            )
            try:
                result = fitter(sample, trial_options)
                error = align_columns(reference, result.columns, allow_sign).max_l2
            except EcaError as error_info:
                logger.warning(f"Trial {trial} at N={n} failed: {error_info}")
                error = np.nan
            records.append(
                {Columns.N_DOCUMENTS: n, Columns.TRIAL: trial, Columns.MAX_L2_ERROR: error}
            )
        logger.info(f"Finished {trials} trials at N={n}.")

    trial_table = pd.DataFrame(records)
    table = summarize_trials(trial_table)
    slope, intercept = log_log_slope(table)
    return SweepResult(table, trial_table, slope, intercept, truth)


def reference_topics(truth: GroundTruth) -> Tuple[TopicMatrix, bool]:
    """
    The columns a fit is scored against and whether their signs are identifiable.

    LDA fits return probability topics; every other model yields canonical
    columns of its last view, each determined up to sign.
    """
    if truth.spec.model == GeneratorModel.LDA:
        return truth.topics[0], False
    return canonicalize(truth.topics[-1], truth.factors), True


def summarize_trials(trial_table: pd.DataFrame) -> pd.DataFrame:
    """Median, quartiles and confidence half-width of the error at each N."""
    grouped = trial_table.groupby(Columns.N_DOCUMENTS)[Columns.MAX_L2_ERROR]
    table = pd.DataFrame(
        {
            Columns.MEDIAN: grouped.median(),
            Columns.LOWER_QUARTILE: grouped.quantile(0.25),
            Columns.UPPER_QUARTILE: grouped.quantile(0.75),
            Columns.CI_HALF_WIDTH: CONFIDENCE_QUANTILE
            * grouped.std(ddof=1).fillna(0.0)
            / np.sqrt(grouped.count().clip(lower=1)),
            Columns.N_TRIALS: grouped.count(),
        }
    )
    return table.reset_index()


def log_log_slope(table: pd.DataFrame) -> Tuple[float, float]:
    """Least-squares fit of log(median error) against log(N)."""
    usable = table[np.isfinite(table[Columns.MEDIAN])]
    if len(usable) < 2:
        return np.nan, np.nan
    errors = np.maximum(usable[Columns.MEDIAN].to_numpy(), np.finfo(float).tiny)
    regression = stats.linregress(
        np.log(usable[Columns.N_DOCUMENTS].to_numpy(dtype=float)), np.log(errors)
    )
    return float(regression.slope), float(regression.intercept)

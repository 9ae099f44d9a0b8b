import numpy as np
import pandas as pd
import pytest

from excess_correlation.constants import Columns
from excess_correlation.evaluation import (
    log_log_slope,
    reference_topics,
    sample_complexity_sweep,
    summarize_trials,
)
from excess_correlation.model import RecoveryResult, TopicMatrixMode
from excess_correlation.model.exceptions import RankCollapseError
from excess_correlation.pipeline import FitOptions
from excess_correlation.synthetic import GeneratorSpec, build_ground_truth

GENERATOR = GeneratorSpec(d=10, k=2, doc_len=5, alpha=[0.5, 0.5], seed=4)
OPTIONS = FitOptions(k=2, alpha0=1.0)


def _trial_table(errors_by_n):
    return pd.DataFrame(
        [
            {Columns.N_DOCUMENTS: n, Columns.TRIAL: trial, Columns.MAX_L2_ERROR: error}
            for n, errors in errors_by_n.items()
            for trial, error in enumerate(errors)
        ]
    )


#########################
# Test summarize_trials #
#########################


def test_summarize_trials():
    table = summarize_trials(_trial_table({100: [1.0, 2.0, 3.0, 4.0], 400: [0.5]}))

    first = table.iloc[0]
    assert table[Columns.N_DOCUMENTS].tolist() == [100, 400]
    assert first[Columns.MEDIAN] == pytest.approx(2.5)
    assert first[Columns.LOWER_QUARTILE] == pytest.approx(1.75)
    assert first[Columns.UPPER_QUARTILE] == pytest.approx(3.25)
    assert first[Columns.CI_HALF_WIDTH] == pytest.approx(
        1.96 * np.std([1.0, 2.0, 3.0, 4.0], ddof=1) / 2.0
    )
    assert table.iloc[1][Columns.CI_HALF_WIDTH] == 0.0
    assert table[Columns.N_TRIALS].tolist() == [4, 1]


def test_failed_trials_are_not_counted():
    table = summarize_trials(_trial_table({100: [1.0, np.nan, 3.0]}))

    assert table.iloc[0][Columns.MEDIAN] == pytest.approx(2.0)
    assert table.iloc[0][Columns.N_TRIALS] == 2


######################
# Test log_log_slope #
######################


def test_log_log_slope_of_root_n_decay():
    sizes = np.array([1_000, 10_000, 100_000])
    table = pd.DataFrame({Columns.N_DOCUMENTS: sizes, Columns.MEDIAN: 3.0 / np.sqrt(sizes)})

    slope, intercept = log_log_slope(table)

    assert slope == pytest.approx(-0.5)
    assert intercept == pytest.approx(np.log(3.0))


def test_log_log_slope_needs_two_points():
    table = pd.DataFrame({Columns.N_DOCUMENTS: [10, 100], Columns.MEDIAN: [np.nan, 1.0]})

    assert all(np.isnan(log_log_slope(table)))


################################
# Test sample_complexity_sweep #
################################


def test_sweep_calls_fitter_for_every_trial(mocker):
    constant = RecoveryResult(np.zeros((10, 2)), [1.0, 0.5], [1.0, 1.0], [1.0, 1.0], k=2)
    fitter = mocker.Mock(return_value=constant)

    result = sample_complexity_sweep(GENERATOR, [50, 100], 3, OPTIONS, fitter=fitter)

    assert fitter.call_count == 6
    seeds = {call.args[1].seed for call in fitter.call_args_list}
    assert len(seeds) == 6
    assert len(result.trials) == 6
    assert result.table[Columns.N_TRIALS].tolist() == [3, 3]
    # A fitter that ignores its data has the same error at every N
    assert result.slope == pytest.approx(0.0, abs=1e-12)


def test_sweep_records_failed_trials(mocker):
    fitter = mocker.Mock(side_effect=RankCollapseError("no signal"))

    result = sample_complexity_sweep(GENERATOR, [50], 2, OPTIONS, fitter=fitter)

    assert result.trials[Columns.MAX_L2_ERROR].isna().all()
    assert np.isnan(result.slope)


def test_sweep_is_reproducible():
    first = sample_complexity_sweep(GENERATOR, [300, 600], 2, OPTIONS, seed=1)
    second = sample_complexity_sweep(GENERATOR, [300, 600], 2, OPTIONS, seed=1)

    pd.testing.assert_frame_equal(first.trials, second.trials)


@pytest.mark.parametrize("sample_sizes, trials", [([], 2), ([100], 0)])
def test_sweep_rejects_empty_sweeps(sample_sizes, trials):
    with pytest.raises(ValueError):
        sample_complexity_sweep(GENERATOR, sample_sizes, trials, OPTIONS)


def test_sweep_needs_fitter_outside_lda():
    generator = GeneratorSpec(model="multi-view", d=10, k=2)

    with pytest.raises(ValueError):
        sample_complexity_sweep(generator, [100], 1, OPTIONS)


def test_reference_topics():
    lda_truth = build_ground_truth(GENERATOR)
    views_truth = build_ground_truth(GeneratorSpec(model="multi-view", d=10, k=2), seed=0)

    lda_reference, lda_sign = reference_topics(lda_truth)
    views_reference, views_sign = reference_topics(views_truth)

    assert lda_reference is lda_truth.topics[0]
    assert not lda_sign
    assert views_reference.mode == TopicMatrixMode.CANONICAL
    assert views_sign


@pytest.mark.slow
def test_lda_error_decays_at_root_n():
    """The median error of the empirical fit shrinks like N^(-1/2)."""
    generator = GeneratorSpec(d=50, k=5, doc_len=3, alpha=[0.2] * 5, seed=2)
    options = FitOptions(k=5, alpha0=1.0)

    result = sample_complexity_sweep(generator, [1_000, 10_000, 100_000], 20, options)
    medians = result.table.set_index(Columns.N_DOCUMENTS)[Columns.MEDIAN]

    assert -0.65 <= result.slope <= -0.35
    assert medians[100_000] <= 0.05

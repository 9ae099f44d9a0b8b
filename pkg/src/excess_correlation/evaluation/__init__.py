from excess_correlation.evaluation.alignment import EvalReport, align_columns
from excess_correlation.evaluation.errors import moment_errors, probe_directions
from excess_correlation.evaluation.sweep import (
    SweepResult,
    log_log_slope,
    reference_topics,
    sample_complexity_sweep,
    summarize_trials,
)

import dataclasses
from pathlib import Path
from typing import Any, Dict, Optional, Tuple

import numpy as np
from loguru import logger
from rich.console import Group, RenderableType

from excess_correlation.constants import paths
from excess_correlation.evaluation.alignment import align_columns
from excess_correlation.evaluation.errors import moment_errors, probe_directions
from excess_correlation.evaluation.sweep import reference_topics, sample_complexity_sweep
from excess_correlation.interface.configuration import RunConfig
from excess_correlation.interface.records import (
    package_versions,
    read_metadata,
    read_topic_matrix,
    result_record,
    top_words,
    write_metadata,
    write_topic_matrix,
)
from excess_correlation.interface.uci import (
    default_vocabulary,
    read_uci_bagofwords,
    write_uci_bagofwords,
)
from excess_correlation.interface.utilities import make_bold, make_table
from excess_correlation.model.corpus import Corpus
from excess_correlation.model.factors import DirichletParams
from excess_correlation.moments.accumulator import MomentOptions, accumulate
from excess_correlation.moments.dirichlet import lda_raw_moments
from excess_correlation.pipeline.lda import fit_lda
from excess_correlation.spectral.utilities import get_rng
from excess_correlation.synthetic.specification import GeneratorModel, generate_samples


def generate(config: RunConfig) -> str:
    """Sample a synthetic data set and write it with its ground truth."""
    output_directory = config.output_paths["output_directory"]
    spec = config.generator_spec()
    truth, sample = generate_samples(spec)

    if isinstance(sample, Corpus):
        write_uci_bagofwords(
            sample, output_directory / paths.DOCWORD_FILE, output_directory / paths.VOCAB_FILE
        )
        written = f"{sample.n_docs} documents"
    else:
        np.savez(
            output_directory / paths.SAMPLES_FILE,
            factors=sample.factors,
            **{f"view_{index + 1}": view for index, view in enumerate(sample.views)},
        )
        written = f"{len(sample.factors)} samples of {len(sample.views)} views"
    reference, _ = reference_topics(truth)
    write_topic_matrix(output_directory / paths.TRUE_TOPICS_FILE, reference.entries)

    record: Dict[str, Any] = {
        "command": config.command,
        "versions": package_versions(),
        "generator": spec.to_dict(),
    }
    if spec.model == GeneratorModel.LDA:
        record["alpha"] = truth.dirichlet.alpha
    if truth.shifts is not None:
        record["shifts"] = truth.shifts
    if len(truth.topics) > 1:
        record["view_topics"] = [topics.entries for topics in truth.topics]
    _write_run_records(config, record)
    return make_bold(
        f"Wrote {written} from a {spec.model.value} model to {output_directory}."
    )


def fit(config: RunConfig, n_top_words: Optional[int] = None) -> str:
    """Fit topics to a bag-of-words corpus and write them with a metadata record."""
    output_directory = config.output_paths["output_directory"]
    corpus = read_uci_bagofwords(
        config.input_paths["docword"], config.input_paths.get("vocab")
    )
    options = config.fit_options()
    result = fit_lda(corpus, options)

    topics_path = output_directory / paths.TOPICS_FILE
    write_topic_matrix(topics_path, result.columns, corpus.vocabulary)
    if n_top_words:
        vocabulary = corpus.vocabulary
        if vocabulary is None:
            logger.warning("No vocabulary file given; reporting top words by word id.")
            vocabulary = default_vocabulary(corpus.d)
        top_words(result.columns, vocabulary, n_top_words).to_csv(
            output_directory / paths.TOP_WORDS_FILE, sep="\t", index=False
        )

    _write_run_records(
        config,
        {
            "command": config.command,
            "versions": package_versions(),
            "seed": options.seed,
            "options": options.to_dict(),
            "n_docs": corpus.n_docs,
            "d": corpus.d,
            "result": result_record(result),
        },
    )
    return make_bold(
        f"Recovered {result.n_columns} of {result.k} topics ({result.status.value}); "
        f"wrote them to {topics_path}."
    )


def evaluate(config: RunConfig, allow_sign: bool = False) -> RenderableType:
    """Align estimated topics with the true ones and report the column errors."""
    output_directory = config.output_paths["output_directory"]
    truth = read_topic_matrix(config.input_paths["true_topics"])
    estimate = read_topic_matrix(config.input_paths["topics"])

    alpha_true = alpha_hat = None
    if "truth_metadata" in config.input_paths:
        alpha_true = read_metadata(config.input_paths["truth_metadata"]).get("alpha")
    if "metadata" in config.input_paths:
        alpha_hat = read_metadata(config.input_paths["metadata"]).get("result", {}).get(
            "alpha_hat"
        )
    report = align_columns(truth, estimate, allow_sign, alpha_true, alpha_hat)
    if alpha_true is not None and "docword" in config.input_paths:
        report.moment_errors = _lda_moment_errors(config, truth, DirichletParams(alpha_true))

    report.to_frame().to_csv(output_directory / paths.EVALUATION_FILE, sep="\t", index=False)
    write_metadata(
        output_directory / paths.EVALUATION_RECORD_FILE,
        {"command": config.command, "versions": package_versions(), **report.to_dict()},
    )
    output = f"Matched {report.n_matched} columns: max l2 error {report.max_l2:.3e}"
    if report.alpha_error is not None:
        output += f", alpha error {report.alpha_error:.3e}"
    if report.moment_errors is not None:
        pairs_error, triples_error = report.moment_errors
        output += f", moment errors E_P {pairs_error:.3e} and E_T {triples_error:.3e}"
    return Group(
        make_table(report.to_frame(), title="Column errors"), make_bold(output + ".")
    )


def sweep(config: RunConfig) -> RenderableType:
    """Run the sample-complexity experiment on a synthetic LDA model."""
    output_directory = config.output_paths["output_directory"]
    spec = config.generator_spec()
    options = dataclasses.replace(
        config.fit_options(), k=spec.k, alpha0=spec.dirichlet.alpha0
    )
    result = sample_complexity_sweep(spec, config.sample_sizes, config.trials, options)

    result.table.to_csv(output_directory / paths.SWEEP_TABLE_FILE, sep="\t", index=False)
    result.trials.to_csv(output_directory / paths.SWEEP_TRIALS_FILE, sep="\t", index=False)
    _write_run_records(
        config,
        {
            "command": config.command,
            "versions": package_versions(),
            "generator": spec.to_dict(),
            "options": options.to_dict(),
            "slope": result.slope,
            "intercept": result.intercept,
            "table": result.table.to_dict(orient="list"),
        },
    )
    return Group(
        make_table(result.table, title="Largest column error by sample size"),
        make_bold(f"Log-log slope of the median error against N: {result.slope:.3f}."),
    )


def moments(config: RunConfig, n_probes: int = 3) -> str:
    """Write the modified mean, pairs and a few contracted third moments of a corpus."""
    output_directory = config.output_paths["output_directory"]
    corpus = read_uci_bagofwords(
        config.input_paths["docword"], config.input_paths.get("vocab")
    )
    options = config.fit_options()
    moment_options = MomentOptions(
        estimator=options.estimator_mode, dense_pairs_cap=options.dense_pairs_cap
    )
    modified = accumulate(corpus, moment_options).finalize().modified(options.alpha0)

    probes = get_rng(options.seed).standard_normal((n_probes, corpus.d))
    probes /= np.linalg.norm(probes, axis=1, keepdims=True)
    arrays = {
        "mean": modified.mean,
        "probes": probes,
        "pairs_probes": modified.pairs_action(probes.T),
        "triples_probes": np.column_stack(
            [np.asarray(modified.triples(probe) @ probe) for probe in probes]
        ),
    }
    if corpus.d <= options.dense_pairs_cap:
        arrays["pairs"] = modified.dense_pairs
    np.savez(output_directory / paths.MOMENTS_FILE, **arrays)

    _write_run_records(
        config,
        {
            "command": config.command,
            "versions": package_versions(),
            "seed": options.seed,
            "alpha0": options.alpha0,
            "n_docs": corpus.n_docs,
            "d": corpus.d,
            "diagnostics": modified.diagnostics,
        },
    )
    return make_bold(f"Wrote moments of {corpus.n_docs} documents to {output_directory}.")


def _lda_moment_errors(
    config: RunConfig, topics: np.ndarray, params: DirichletParams
) -> Tuple[float, float]:
    """E_P and E_T of the corpus moments against those of the true LDA model."""
    corpus = read_uci_bagofwords(config.input_paths["docword"])
    exact = lda_raw_moments(topics, params).modified(params.alpha0)
    empirical = accumulate(corpus).finalize().modified(params.alpha0)
    return moment_errors(exact, empirical, probe_directions(exact, params.k, config.seed))


def _write_run_records(config: RunConfig, record: Dict[str, Any]) -> None:
    output_directory: Path = config.output_paths["output_directory"]
    write_metadata(output_directory / paths.METADATA_FILE, record)
    config.to_yaml(output_directory / paths.CONFIGURATION_FILE)

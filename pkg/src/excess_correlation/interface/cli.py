from pathlib import Path
from typing import Optional, Tuple

import click
from rich.console import Console
from vivarium.framework.logging import configure_logging_to_terminal

from excess_correlation.interface import actions
from excess_correlation.interface.configuration import RunConfig
from excess_correlation.interface.utilities import report_errors
from excess_correlation.moments.accumulator import EstimatorMode
from excess_correlation.pipeline.options import SvdMethod
from excess_correlation.synthetic.specification import GeneratorModel

EXISTING_FILE = click.Path(exists=True, dir_okay=False, path_type=Path)


def common_options(command):
    command = click.option(
        "--configuration",
        "-c",
        type=EXISTING_FILE,
        help="A YAML specification replacing the packaged configuration.",
    )(command)
    command = click.option("--seed", type=int, help="Seed of every random draw.")(command)
    command = click.option(
        "--output-dir",
        "-o",
        type=click.Path(file_okay=False, path_type=Path),
        default=Path("."),
        show_default=True,
        help="Directory for the files this command writes.",
    )(command)
    return command


@click.group()
@click.option("-v", "--verbose", count=True, help="Log more; repeat for debug output.")
def eca(verbose: int):
    """A command line utility for Excess Correlation Analysis."""
    configure_logging_to_terminal(verbosity=verbose, long_format=False)


@eca.command()
@common_options
@click.option(
    "--model", type=click.Choice([model.value for model in GeneratorModel]), help="Model."
)
@click.option("--d", type=int, help="Vocabulary size or observation dimension.")
@click.option("--k", type=int, help="Number of latent factors.")
@click.option("--docs", type=int, help="Number of documents or samples.")
@click.option("--doc-len", type=int, help="Tokens per document.")
@click.option("--noise-scale", type=float, help="Gaussian noise scale.")
@report_errors
def generate(
    configuration: Optional[Path],
    seed: Optional[int],
    output_dir: Path,
    model: Optional[str],
    d: Optional[int],
    k: Optional[int],
    docs: Optional[int],
    doc_len: Optional[int],
    noise_scale: Optional[float],
):
    """Sample a synthetic corpus and its ground truth."""
    config = RunConfig(
        "generate",
        output_paths={"output_directory": output_dir},
        specification=configuration,
        overrides={
            "run": {"seed": seed},
            "generator": {
                "model": model,
                "d": d,
                "k": k,
                "n": docs,
                "doc_len": doc_len,
                "noise_scale": noise_scale,
            },
        },
    )
    config.validate_paths()
    Console().print(actions.generate(config))


@eca.command()
@common_options
@click.argument("docword", type=EXISTING_FILE)
@click.option("--vocab", type=EXISTING_FILE, help="Vocabulary file, one word per line.")
@click.option("--k", type=int, help="Number of topics.")
@click.option("--alpha0", type=float, help="Sum of the Dirichlet parameters.")
@click.option("--svd-method", type=click.Choice([method.value for method in SvdMethod]))
@click.option("--estimator", type=click.Choice([mode.value for mode in EstimatorMode]))
@click.option(
    "--clip-normalize/--no-clip-normalize",
    default=None,
    help="Project each topic onto the probability simplex.",
)
@click.option("--top-words", type=int, help="Report the top words of each topic.")
@report_errors
def fit(
    configuration: Optional[Path],
    seed: Optional[int],
    output_dir: Path,
    docword: Path,
    vocab: Optional[Path],
    k: Optional[int],
    alpha0: Optional[float],
    svd_method: Optional[str],
    estimator: Optional[str],
    clip_normalize: Optional[bool],
    top_words: Optional[int],
):
    """Fit LDA topics to a UCI bag-of-words corpus."""
    input_paths = {"docword": docword}
    if vocab is not None:
        input_paths["vocab"] = vocab
    config = RunConfig(
        "fit",
        input_paths=input_paths,
        output_paths={"output_directory": output_dir},
        specification=configuration,
        overrides={
            "run": {"seed": seed},
            "fit": {
                "k": k,
                "alpha0": alpha0,
                "svd_method": svd_method,
                "clip_normalize": clip_normalize,
            },
            "moments": {"estimator": estimator},
        },
    )
    config.validate_paths()
    Console().print(actions.fit(config, top_words))


@eca.command(name="eval")
@common_options
@click.argument("true_topics", type=EXISTING_FILE)
@click.argument("topics", type=EXISTING_FILE)
@click.option("--allow-sign", is_flag=True, help="Match columns up to sign.")
@click.option("--truth-metadata", type=EXISTING_FILE, help="Record holding the true alpha.")
@click.option("--metadata", type=EXISTING_FILE, help="Fit record holding alpha_hat.")
@click.option(
    "--docword", type=EXISTING_FILE, help="Corpus whose moments to compare with the truth."
)
@report_errors
def evaluate(
    configuration: Optional[Path],
    seed: Optional[int],
    output_dir: Path,
    true_topics: Path,
    topics: Path,
    allow_sign: bool,
    truth_metadata: Optional[Path],
    metadata: Optional[Path],
    docword: Optional[Path],
):
    """Compare estimated topics with the true ones."""
    input_paths = {"true_topics": true_topics, "topics": topics}
    if truth_metadata is not None:
        input_paths["truth_metadata"] = truth_metadata
    if metadata is not None:
        input_paths["metadata"] = metadata
    if docword is not None:
        input_paths["docword"] = docword
    config = RunConfig(
        "eval",
        input_paths=input_paths,
        output_paths={"output_directory": output_dir},
        specification=configuration,
        overrides={"run": {"seed": seed}},
    )
    config.validate_paths()
    Console().print(actions.evaluate(config, allow_sign))


@eca.command()
@common_options
@click.option("--docs", "-n", type=int, multiple=True, help="A sample size; repeatable.")
@click.option("--trials", type=int, help="Fits per sample size.")
@click.option("--d", type=int, help="Vocabulary size.")
@click.option("--k", type=int, help="Number of topics.")
@click.option("--doc-len", type=int, help="Tokens per document.")
@click.option("--svd-method", type=click.Choice([method.value for method in SvdMethod]))
@report_errors
def sweep(
    configuration: Optional[Path],
    seed: Optional[int],
    output_dir: Path,
    docs: Tuple[int, ...],
    trials: Optional[int],
    d: Optional[int],
    k: Optional[int],
    doc_len: Optional[int],
    svd_method: Optional[str],
):
    """Measure how the topic error shrinks with the number of documents."""
    config = RunConfig(
        "sweep",
        output_paths={"output_directory": output_dir},
        specification=configuration,
        overrides={
            "run": {"seed": seed},
            "generator": {
                "model": GeneratorModel.LDA.value,
                "d": d,
                "k": k,
                "doc_len": doc_len,
            },
            "fit": {"svd_method": svd_method},
            "sweep": {"sample_sizes": list(docs) or None, "trials": trials},
        },
    )
    config.validate_paths()
    Console().print(actions.sweep(config))


@eca.command()
@common_options
@click.argument("docword", type=EXISTING_FILE)
@click.option("--alpha0", type=float, help="Sum of the Dirichlet parameters.")
@click.option("--estimator", type=click.Choice([mode.value for mode in EstimatorMode]))
@click.option("--n-probes", type=int, default=3, show_default=True, help="Probe directions.")
@report_errors
def moments(
    configuration: Optional[Path],
    seed: Optional[int],
    output_dir: Path,
    docword: Path,
    alpha0: Optional[float],
    estimator: Optional[str],
    n_probes: int,
):
    """Write the empirical moments of a corpus for inspection."""
    config = RunConfig(
        "moments",
        input_paths={"docword": docword},
        output_paths={"output_directory": output_dir},
        specification=configuration,
        overrides={
            "run": {"seed": seed},
            "fit": {"alpha0": alpha0},
            "moments": {"estimator": estimator},
        },
    )
    config.validate_paths()
    Console().print(actions.moments(config, n_probes))

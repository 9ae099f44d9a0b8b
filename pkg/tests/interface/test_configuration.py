import pytest
from vivarium.config_tree import ConfigurationError

from excess_correlation.interface.configuration import RunConfig, drop_unset
from excess_correlation.moments.accumulator import EstimatorMode
from excess_correlation.pipeline import FitOptions
from excess_correlation.pipeline.options import SvdMethod
from excess_correlation.synthetic import GeneratorModel, GeneratorSpec


def test_packaged_configuration_gives_defaults():
    config = RunConfig("fit")

    assert config.seed == 0
    assert config.fit_options() == FitOptions(k=5, seed=0)
    assert config.generator_spec() == GeneratorSpec(seed=0)
    assert config.sample_sizes == [1_000, 10_000, 100_000]
    assert config.trials == 20


def test_overrides_replace_the_specification():
    config = RunConfig(
        "fit",
        overrides={
            "run": {"seed": 7},
            "fit": {"k": 3, "alpha0": None, "svd_method": "power_iteration"},
            "moments": {"estimator": "first-three-tokens"},
        },
    )
    options = config.fit_options()

    assert options.k == 3
    assert options.alpha0 == 0.0
    assert options.seed == 7
    assert options.svd_method == SvdMethod.POWER_ITERATION
    assert options.estimator_mode == EstimatorMode.FIRST_THREE_TOKENS


def test_specification_dict_is_layered_over_defaults():
    config = RunConfig("sweep", specification={"fit": {"k": 2}, "sweep": {"trials": 3}})

    assert config.fit_options().k == 2
    assert config.fit_options().alpha0 == 0.0
    assert config.seed is None
    assert config.trials == 3


def test_specification_file_is_read(tmp_path):
    path = tmp_path / "specification.yaml"
    path.write_text("generator:\n    model: independent-poisson\n    d: 8\n    k: 2\n")

    spec = RunConfig("generate", specification=path).generator_spec()

    assert spec.model == GeneratorModel.POISSON
    assert (spec.d, spec.k) == (8, 2)


def test_missing_specification_file_is_rejected(tmp_path):
    with pytest.raises(ConfigurationError):
        RunConfig("fit", specification=tmp_path / "missing.yaml")


def test_drop_unset():
    overrides = {"run": {"seed": None}, "fit": {"k": 4, "alpha0": None}, "trials": None}

    assert drop_unset(overrides) == {"fit": {"k": 4}}


def test_configuration_reads_back_from_yaml(tmp_path):
    config = RunConfig(
        "fit",
        input_paths={"docword": tmp_path / "docword.txt"},
        output_paths={"output_directory": tmp_path / "out"},
        overrides={"run": {"seed": 11}, "fit": {"k": 2, "alpha0": 0.5}},
    )
    path = tmp_path / "configuration.yaml"

    config.to_yaml(path)
    copy = RunConfig.from_yaml(path)

    assert copy.command == "fit"
    assert copy.input_paths == config.input_paths
    assert copy.output_paths == config.output_paths
    assert copy.fit_options() == config.fit_options()


#######################
# Test validate_paths #
#######################


def test_missing_input_is_rejected(tmp_path):
    config = RunConfig("fit", input_paths={"docword": tmp_path / "missing.txt"})

    with pytest.raises(ConfigurationError):
        config.validate_paths()


def test_output_locations_are_created(tmp_path):
    config = RunConfig(
        "fit",
        output_paths={
            "output_directory": tmp_path / "a" / "b",
            "record": tmp_path / "c" / "record.yaml",
        },
    )

    config.validate_paths()

    assert (tmp_path / "a" / "b").is_dir()
    assert (tmp_path / "c").is_dir()
    assert not (tmp_path / "c" / "record.yaml").exists()

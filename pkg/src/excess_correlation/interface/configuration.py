from pathlib import Path
from typing import Any, Dict, List, Optional, Union

import yaml
from vivarium.config_tree import ConfigTree, ConfigurationError

from excess_correlation.constants import paths
from excess_correlation.moments.accumulator import MomentOptions
from excess_correlation.pipeline.options import FitOptions
from excess_correlation.synthetic.specification import GeneratorSpec

PathLike = Union[str, Path]

LAYERS = ["base", "specification", "override"]

SWEEP_DEFAULTS = {"sweep": {"sample_sizes": [1_000, 10_000, 100_000], "trials": 20}}
RUN_DEFAULTS = {"run": {"seed": None}}


def configuration_defaults() -> Dict[str, Any]:
    return {
        **FitOptions.CONFIGURATION_DEFAULTS,
        **MomentOptions.CONFIGURATION_DEFAULTS,
        **GeneratorSpec.CONFIGURATION_DEFAULTS,
        **SWEEP_DEFAULTS,
        **RUN_DEFAULTS,
    }


def drop_unset(overrides: Dict[str, Any]) -> Dict[str, Any]:
    """Remove options that were not given on the command line."""
    cleaned = {}
    for key, value in overrides.items():
        if isinstance(value, dict):
            value = drop_unset(value)
            if value:
                cleaned[key] = value
        elif value is not None:
            cleaned[key] = value
    return cleaned


class RunConfig:
    """
    The settings of one CLI run.

    Parameters
    ----------
    command
        The subcommand being run.
    input_paths
        Named files the run reads. They must exist.
    output_paths
        Named files or directories the run writes.
    specification
        A YAML file or a dict for the specification layer. Defaults to the
        packaged configuration.yaml.
    overrides
        Values given explicitly on the command line; unset (None) values are
        ignored.
    """

    def __init__(
        self,
        command: str,
        input_paths: Optional[Dict[str, PathLike]] = None,
        output_paths: Optional[Dict[str, PathLike]] = None,
        specification: Union[PathLike, Dict[str, Any], None] = None,
        overrides: Optional[Dict[str, Any]] = None,
    ):
        self.command = command
        self.input_paths = {name: Path(path) for name, path in (input_paths or {}).items()}
        self.output_paths = {name: Path(path) for name, path in (output_paths or {}).items()}

        self.configuration = ConfigTree(layers=LAYERS)
        self.configuration.update(configuration_defaults(), layer="base", source="defaults")
        if not isinstance(specification, dict):
            source = Path(specification) if specification else paths.RUN_SPECIFICATION
            specification = _load_yaml(source)
        else:
            source = "record"
        self.configuration.update(specification, layer="specification", source=str(source))
        overrides = drop_unset(overrides or {})
        if overrides:
            self.configuration.update(overrides, layer="override", source="command line")

    ##############
    # Properties #
    ##############

    @property
    def seed(self) -> Optional[int]:
        return self.configuration.run.seed

    @property
    def sample_sizes(self) -> List[int]:
        return [int(size) for size in self.configuration.sweep.sample_sizes]

    @property
    def trials(self) -> int:
        return int(self.configuration.sweep.trials)

    ###########
    # Options #
    ###########

    def fit_options(self) -> FitOptions:
        moments = self.configuration.moments
        return FitOptions(
            **self.configuration.fit.to_dict(),
            seed=self.seed,
            estimator_mode=moments.estimator,
            dense_pairs_cap=moments.dense_pairs_cap,
        )

    def generator_spec(self) -> GeneratorSpec:
        return GeneratorSpec(**self.configuration.generator.to_dict(), seed=self.seed)

    def validate_paths(self) -> None:
        """Check every input exists and create the parents of every output."""
        for name, path in self.input_paths.items():
            if not path.exists():
                raise ConfigurationError(f"Input file {path} does not exist.", name)
        for path in self.output_paths.values():
            target = path if not path.suffix else path.parent
            target.mkdir(parents=True, exist_ok=True)

    #################
    # Serialization #
    #################

    def to_dict(self) -> Dict[str, Any]:
        return {
            "command": self.command,
            "input_paths": {name: str(path) for name, path in self.input_paths.items()},
            "output_paths": {name: str(path) for name, path in self.output_paths.items()},
            "configuration": self.configuration.to_dict(),
        }

    def to_yaml(self, path: PathLike) -> None:
        with Path(path).open("w") as configuration_file:
            yaml.safe_dump(self.to_dict(), configuration_file, sort_keys=False)

    @classmethod
    def from_dict(cls, record: Dict[str, Any]) -> "RunConfig":
        return cls(
            record["command"],
            input_paths=record.get("input_paths"),
            output_paths=record.get("output_paths"),
            specification=record["configuration"],
        )

    @classmethod
    def from_yaml(cls, path: PathLike) -> "RunConfig":
        return cls.from_dict(_load_yaml(Path(path)))


def _load_yaml(path: Path) -> Dict[str, Any]:
    if not path.exists():
        raise ConfigurationError(f"Configuration file {path} does not exist.", str(path))
    with path.open() as configuration_file:
        return yaml.safe_load(configuration_file) or {}

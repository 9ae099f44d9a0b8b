import enum
from importlib import metadata
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

import numpy as np
import pandas as pd
import yaml

from excess_correlation.constants import Columns
from excess_correlation.model.results import RecoveryResult

PathLike = Union[str, Path]


def to_serializable(value: Any) -> Any:
    """Convert numpy values, enums and paths into plain YAML-friendly values."""
    if isinstance(value, dict):
        return {str(key): to_serializable(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_serializable(item) for item in value]
    if isinstance(value, np.ndarray):
        return to_serializable(value.tolist())
    if isinstance(value, enum.Enum):
        return value.value
    if isinstance(value, np.bool_):
        return bool(value)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.floating):
        return float(value)
    if isinstance(value, Path):
        return str(value)
    if value is None or isinstance(value, (bool, int, float, str)):
        return value
    return repr(value)


def package_versions() -> Dict[str, str]:
    versions = {}
    for package in ("excess_correlation", "numpy", "scipy", "pandas", "vivarium"):
        try:
            versions[package] = metadata.version(package)
        except metadata.PackageNotFoundError:
            versions[package] = "unknown"
    return versions


def result_record(result: RecoveryResult) -> Dict[str, Any]:
    """The sidecar record of a topics TSV."""
    return to_serializable(
        {
            "column_order": [Columns.get_topic(i) for i in range(result.n_columns)],
            "k": result.k,
            "status": result.status,
            "singular_values": result.singular_values,
            "scale_estimates": result.scale_estimates,
            "skewness_estimates": result.skewness_estimates,
            "kurtosis_estimates": result.kurtosis_estimates,
            "alpha_hat": result.alpha_hat,
            "theta_used": result.theta_used,
            "diagnostics": result.diagnostics,
        }
    )


def write_metadata(path: PathLike, record: Dict[str, Any]) -> None:
    with Path(path).open("w") as metadata_file:
        yaml.safe_dump(to_serializable(record), metadata_file, sort_keys=False)


def read_metadata(path: PathLike) -> Dict[str, Any]:
    with Path(path).open() as metadata_file:
        return yaml.safe_load(metadata_file) or {}


def write_topic_matrix(
    path: PathLike, columns: np.ndarray, vocabulary: Optional[List[str]] = None
) -> None:
    """Write a d x m matrix as TSV with one row per word and one column per topic."""
    columns = np.asarray(columns, dtype=float)
    frame = pd.DataFrame(
        columns, columns=[Columns.get_topic(i) for i in range(columns.shape[1])]
    )
    frame.index.name = Columns.WORD_ID
    if vocabulary is not None:
        frame.insert(0, Columns.WORD, vocabulary)
    frame.to_csv(path, sep="\t", float_format="%.17g")


def read_topic_matrix(path: PathLike) -> np.ndarray:
    frame = pd.read_csv(
        path, sep="\t", index_col=Columns.WORD_ID, float_precision="round_trip"
    )
    return frame.drop(columns=[Columns.WORD], errors="ignore").to_numpy(dtype=float)


def top_words(columns: np.ndarray, vocabulary: List[str], n_words: int = 25) -> pd.DataFrame:
    """The ``n_words`` most probable words of each topic, in decreasing order."""
    columns = np.asarray(columns, dtype=float)
    n_words = min(n_words, columns.shape[0])
    rows = []
    for topic in range(columns.shape[1]):
        order = np.argsort(-columns[:, topic], kind="stable")[:n_words]
        rows.extend(
            {
                Columns.TOPIC: Columns.get_topic(topic),
                Columns.RANK: rank + 1,
                Columns.WORD: vocabulary[index],
                Columns.PROBABILITY: columns[index, topic],
            }
            for rank, index in enumerate(order)
        )
    return pd.DataFrame(
        rows, columns=[Columns.TOPIC, Columns.RANK, Columns.WORD, Columns.PROBABILITY]
    )

import functools
import json
import sys
from typing import Any, Callable, Optional

import click
import pandas as pd
from rich.table import Table
from vivarium.config_tree import ConfigurationError


def make_bold(text: str) -> str:
    return f"[bold]{text}[/bold]"


def make_table(frame: pd.DataFrame, title: Optional[str] = None) -> Table:
    table = Table(title=title)
    for column in frame.columns:
        table.add_column(str(column), justify="right")
    for row in frame.itertuples(index=False):
        table.add_row(*(_format_cell(value) for value in row))
    return table


def report_errors(command: Callable) -> Callable:
    """
    Turn data and configuration errors into a one-line JSON record on stderr
    and exit status 1.
    """

    @functools.wraps(command)
    def wrapper(*args: Any, **kwargs: Any) -> Any:
        try:
            return command(*args, **kwargs)
        except (ValueError, ConfigurationError) as error:
            record = {"error": type(error).__name__, "message": str(error)}
            click.echo(json.dumps(record), err=True)
            sys.exit(1)

    return wrapper


def _format_cell(value: Any) -> str:
    if isinstance(value, float):
        return f"{value:.4g}"
    return str(value)

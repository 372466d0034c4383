from pathlib import Path
from typing import Optional

import typer
from rich.console import Console

from dect.config import Task, build_config, load_config_data
from dect.exceptions import DectException
from dect.models import ValidationError
from dect.runner import run

help_config = "Flat TOML config file, or a manifest.json of a previous run."
help_directions = "Number of directions."
help_heights = "Number of height samples per direction."
help_lambda = "Sigmoid tightness of the smooth ECT."
help_seed = "Experiment seed; all randomness is derived from it."
help_normalize = "ECT normalization: none, vertex or l2."
help_constrained = "Keep directions on the unit sphere: true or false."
help_out = "Output directory."
help_input = "Input complex file (.off, .edgelist/.txt, .csv)."
help_normalize_input = "Center and rescale the input complex before computing."

console = Console()


class remove_stacktrace:  # noqa: N801
    """Print dect errors as a one-line diagnostic and exit nonzero."""

    def __enter__(self):
        return self

    def __exit__(self, exc_type, exc_value, traceback):
        if exc_type is not None and issubclass(exc_type, (DectException, ValidationError, OSError)):
            console.print(f"[bold red]Error:[/bold red] {exc_value}")
            raise typer.Exit(1)
        return False  # let other exceptions propagate normally


def parse_bool(value: Optional[str]) -> Optional[bool]:
    if value is None:
        return None
    lowered = value.lower()
    if lowered in ("true", "1", "yes"):
        return True
    elif lowered in ("false", "0", "no"):
        return False
    raise typer.BadParameter(f'Expected "true" or "false"; got "{value}".')


def run_task(task: Task, config: Optional[Path], **overrides):
    """Merge ``config`` with non-``None`` CLI overrides, run ``task`` and exit with its code."""
    with remove_stacktrace():
        data = load_config_data(config) if config is not None else {}
        if "constrained" in overrides:
            overrides["constrained"] = parse_bool(overrides["constrained"])
        experiment = build_config(data, **overrides, task=task)
        code = run(experiment, console=console)
    raise typer.Exit(code)

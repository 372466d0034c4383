from pathlib import Path
from typing import Optional

from typer import Option

from dect.cli.common import (
    help_config,
    help_constrained,
    help_directions,
    help_heights,
    help_input,
    help_lambda,
    help_normalize,
    help_normalize_input,
    help_out,
    help_seed,
    run_task,
)
from dect.config import Task


def compute(
    input: Optional[Path] = Option(None, "--input", "-i", help=help_input),
    shape: Optional[str] = Option(None, help="Synthetic shape to use when no input file is given."),
    mode: Optional[str] = Option(None, help="hard or smooth."),
    config: Optional[Path] = Option(None, "--config", "-c", help=help_config),
    directions: Optional[int] = Option(None, help=help_directions),
    heights: Optional[int] = Option(None, help=help_heights),
    lambda_: Optional[float] = Option(None, "--lambda", help=help_lambda),
    seed: Optional[int] = Option(None, help=help_seed),
    normalize: Optional[str] = Option(None, help=help_normalize),
    normalize_input: Optional[bool] = Option(None, "--normalize-input/--raw-input", help=help_normalize_input),
    constrained: Optional[str] = Option(None, help=help_constrained),
    out: Optional[Path] = Option(None, help=help_out),
):
    """Compute the ECT grid of a complex."""
    run_task(
        Task.COMPUTE,
        config,
        input=input,
        shape=shape,
        mode=mode,
        directions=directions,
        heights=heights,
        lambda_=lambda_,
        seed=seed,
        normalize=normalize,
        normalize_input=normalize_input,
        constrained=constrained,
        out=out,
    )

from pathlib import Path
from typing import List, Optional

from typer import Option

from dect.cli.common import (
    help_config,
    help_constrained,
    help_directions,
    help_heights,
    help_lambda,
    help_normalize,
    help_out,
    help_seed,
    run_task,
)
from dect.config import Task


def benchmark(
    sizes: Optional[List[int]] = Option(None, "--size", help="Point-cloud size to time; repeatable."),
    config: Optional[Path] = Option(None, "--config", "-c", help=help_config),
    directions: Optional[int] = Option(None, help=help_directions),
    heights: Optional[int] = Option(None, help=help_heights),
    lambda_: Optional[float] = Option(None, "--lambda", help=help_lambda),
    seed: Optional[int] = Option(None, help=help_seed),
    normalize: Optional[str] = Option(None, help=help_normalize),
    constrained: Optional[str] = Option(None, help=help_constrained),
    out: Optional[Path] = Option(None, help=help_out),
):
    """Time the smooth ECT forward pass over growing point clouds."""
    # Typer issues: https://github.com/tiangolo/typer/issues/410
    sizes = sizes if sizes else None
    run_task(
        Task.BENCHMARK,
        config,
        benchmark_sizes=sizes,
        directions=directions,
        heights=heights,
        lambda_=lambda_,
        seed=seed,
        normalize=normalize,
        constrained=constrained,
        out=out,
    )

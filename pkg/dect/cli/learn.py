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

help_steps = "Number of Adam steps."
help_lr = "Adam learning rate."


def learn_directions(
    input: Optional[Path] = Option(None, "--input", "-i", help=help_input),
    steps: Optional[int] = Option(None, help=help_steps),
    lr: Optional[float] = Option(None, help=help_lr),
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
    """Recover a set of target directions from the ECT they produce."""
    run_task(
        Task.LEARN_DIRECTIONS,
        config,
        input=input,
        steps=steps,
        lr=lr,
        directions=directions,
        heights=heights,
        lambda_=lambda_,
        seed=seed,
        normalize=normalize,
        normalize_input=normalize_input,
        constrained=constrained,
        out=out,
    )


def optimize_pointcloud(
    target: Optional[Path] = Option(None, "--target", "-t", help="Target complex file."),
    input: Optional[Path] = Option(None, "--input", "-i", help="Initial point cloud; random if omitted."),
    steps: Optional[int] = Option(None, help=help_steps),
    lr: Optional[float] = Option(None, help=help_lr),
    joint: Optional[bool] = Option(None, "--joint/--no-joint", help="Also update the directions."),
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
    """Move the points of a cloud until its ECT matches a target's."""
    run_task(
        Task.OPTIMIZE_POINTCLOUD,
        config,
        target=target,
        input=input,
        steps=steps,
        lr=lr,
        joint=joint,
        directions=directions,
        heights=heights,
        lambda_=lambda_,
        seed=seed,
        normalize=normalize,
        normalize_input=normalize_input,
        constrained=constrained,
        out=out,
    )

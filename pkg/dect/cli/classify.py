from pathlib import Path
from typing import Optional

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


def classify(
    epochs: Optional[int] = Option(None, help="Maximum number of training epochs."),
    learn: Optional[bool] = Option(None, "--learn-directions/--fixed-directions", help="Train the ECT directions."),
    ablation: Optional[bool] = Option(None, "--ablation/--no-ablation", help="Compare fixed and learned directions over several seeds."),
    config: Optional[Path] = Option(None, "--config", "-c", help=help_config),
    directions: Optional[int] = Option(None, help=help_directions),
    heights: Optional[int] = Option(None, help=help_heights),
    lambda_: Optional[float] = Option(None, "--lambda", help=help_lambda),
    seed: Optional[int] = Option(None, help=help_seed),
    normalize: Optional[str] = Option(None, help=help_normalize),
    constrained: Optional[str] = Option(None, help=help_constrained),
    out: Optional[Path] = Option(None, help=help_out),
):
    """Train an ECT classifier on a synthetic shape dataset."""
    run_task(
        Task.CLASSIFY,
        config,
        epochs=epochs,
        learn_directions=learn,
        ablation=ablation,
        directions=directions,
        heights=heights,
        lambda_=lambda_,
        seed=seed,
        normalize=normalize,
        constrained=constrained,
        out=out,
    )

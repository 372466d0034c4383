"""Forward-pass timing of the smooth ECT over growing point clouds."""

import time
from dataclasses import dataclass
from typing import List, Optional, Sequence

import numpy as np
from rich.console import Console

from .directions import DirectionSet
from .ect import EctConfig, compute_ect
from .shapes import ShapeSpec, generate


@dataclass
class TimingRow:
    num_points: int
    num_directions: int
    seconds: float


@dataclass
class BenchmarkReport:
    rows: List[TimingRow]
    slope: Optional[float]
    """Least-squares slope of log(seconds) against log(num_points); ``None`` for fewer than two sizes."""


def scaling_slope(num_points: Sequence[int], seconds: Sequence[float]) -> Optional[float]:
    if len(num_points) < 2:
        return None
    slope, _ = np.polyfit(np.log(num_points), np.log(np.maximum(seconds, 1e-12)), 1)
    return float(slope)


def benchmark(
    sizes: Sequence[int],
    dirs: DirectionSet,
    config: EctConfig,
    shape: str = "uniform-blob",
    repeats: int = 3,
    seed: int = 0,
    console: Optional[Console] = None,
) -> BenchmarkReport:
    """Time :func:`~dect.ect.compute_ect` on ``shape`` clouds of every size in ``sizes``.

    Each size reports the fastest of ``repeats`` runs.
    """
    rows = []
    for num_points in sizes:
        cloud = generate(ShapeSpec(kind=shape, num_points=num_points, seed=seed))
        best = np.inf
        for _ in range(repeats):
            start = time.perf_counter()
            compute_ect(cloud, dirs, config)
            best = min(best, time.perf_counter() - start)
        rows.append(TimingRow(num_points, len(dirs), best))
        if console is not None:
            console.print(f"  • {num_points:>8} points x {len(dirs)} directions: {best:.4f} s")

    slope = scaling_slope([r.num_points for r in rows], [r.seconds for r in rows])
    return BenchmarkReport(rows, slope)

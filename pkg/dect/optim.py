"""Adam and the two ECT inverse problems.

* :func:`learn_directions` keeps the complex fixed and moves the directions so
  the model's smooth ECT matches a target grid.
* :func:`optimize_pointcloud` keeps the directions fixed and moves the points.

Both minimize the mean squared error between grids.
"""

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Optional, Tuple

import numpy as np
from numpy.typing import ArrayLike
from rich.console import Console

from .complex import GeometricComplex
from .directions import DirectionSet
from .ect import EctConfig, EctGrid, Normalization, ect_smooth
from .exceptions import ConfigError, NonFiniteGradientError, NotPointCloudError, ShapeMismatchError
from .grad import ect_smooth_backward
from .models import BaseModel
from .typing import FloatArray

try:
    from pydantic.v1 import confloat
except ImportError:
    from pydantic import confloat


class LrSchedule(str, Enum):
    CONSTANT = "constant"
    COSINE = "cosine"


class AdamConfig(BaseModel):
    """Adam hyperparameters."""

    lr: confloat(ge=0) = 0.001
    beta1: confloat(ge=0, lt=1) = 0.9
    beta2: confloat(ge=0, lt=1) = 0.999
    eps: confloat(gt=0) = 1e-8
    schedule: LrSchedule = LrSchedule.CONSTANT

    def lr_at(self, step: int, total_steps: int) -> float:
        """Learning rate for 0-based ``step`` of a ``total_steps`` run."""
        if self.schedule == LrSchedule.COSINE and total_steps > 0:
            return self.lr * 0.5 * (1.0 + math.cos(math.pi * step / total_steps))
        return self.lr

    def init_state(self, shape) -> "AdamState":
        return AdamState(
            np.zeros(shape),
            np.zeros(shape),
            t=0,
            lr=self.lr,
            beta1=self.beta1,
            beta2=self.beta2,
            eps=self.eps,
        )


@dataclass(frozen=True)
class AdamState:
    """Moment estimates of one parameter array."""

    m: FloatArray
    v: FloatArray
    t: int = 0
    lr: float = 0.001
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8


def adam_step(
    params: ArrayLike,
    grads: ArrayLike,
    state: AdamState,
    lr: Optional[float] = None,
) -> Tuple[FloatArray, AdamState]:
    """One bias-corrected Adam update.

    Parameters
    ----------
    lr: Optional[float]
        Overrides ``state.lr`` for this step (learning-rate schedules).

    Returns
    -------
    tuple
        ``(new_params, new_state)``; inputs are not modified.

    Raises
    ------
    NonFiniteGradientError
        ``grads`` contains NaN or Inf.
    """
    params = np.asarray(params, dtype=np.float64)
    grads = np.asarray(grads, dtype=np.float64)
    if params.shape != grads.shape or params.shape != state.m.shape:
        raise ShapeMismatchError(
            f"Parameter {params.shape}, gradient {grads.shape} and state {state.m.shape} shapes must agree."
        )
    if not np.all(np.isfinite(grads)):
        raise NonFiniteGradientError("non-finite gradient")

    lr = state.lr if lr is None else lr
    t = state.t + 1
    m = state.beta1 * state.m + (1.0 - state.beta1) * grads
    v = state.beta2 * state.v + (1.0 - state.beta2) * (grads * grads)

    m_hat = m / (1.0 - state.beta1**t)
    v_hat = v / (1.0 - state.beta2**t)
    new_params = params - lr * m_hat / (np.sqrt(v_hat) + state.eps)

    return new_params, AdamState(m, v, t, state.lr, state.beta1, state.beta2, state.eps)


class Adam:
    """Adam over a dictionary of named parameter arrays."""

    def __init__(self, config: Optional[AdamConfig] = None, total_steps: int = 0):
        self.config = AdamConfig() if config is None else config
        self.total_steps = total_steps
        self.states: Dict[str, AdamState] = {}
        self.step_count = 0

    def step(self, params: Dict[str, FloatArray], grads: Dict[str, FloatArray]) -> Dict[str, FloatArray]:
        lr = self.config.lr_at(self.step_count, self.total_steps)
        out = {}
        for key, value in params.items():
            if key not in self.states:
                self.states[key] = self.config.init_state(np.shape(value))
            out[key], self.states[key] = adam_step(value, grads[key], self.states[key], lr=lr)
        self.step_count += 1
        return out


def mse_loss(grid_a: EctGrid, grid_b: EctGrid) -> Tuple[float, FloatArray]:
    """Mean squared difference of two grids and its gradient with respect to ``grid_a``.

    Raises
    ------
    ShapeMismatchError
        Grids differ in shape or were sampled/normalized differently.
    """
    if grid_a.shape != grid_b.shape:
        raise ShapeMismatchError(f"Cannot compare ECT grids of shapes {grid_a.shape} and {grid_b.shape}.")
    if not grid_a.config.grid_compatible(grid_b.config) or not np.array_equal(grid_a.heights, grid_b.heights):
        raise ShapeMismatchError("ECT grids were computed with different height grids or normalizations.")

    diff = grid_a.values - grid_b.values
    loss = float(np.mean(diff * diff))
    upstream = 2.0 * diff / diff.size
    return loss, upstream


@dataclass
class FitReport:
    """Outcome of an ECT fitting run.

    ``loss_trace[i]`` is the loss at the start of step ``i``; ``final_loss``
    is evaluated after the last update.
    """

    loss_trace: List[float]
    final_params: FloatArray
    steps_run: int
    converged: bool
    initial_loss: float
    final_loss: float
    final_directions: Optional[FloatArray] = None
    iterates: List[FloatArray] = field(default_factory=list)


def moving_average(trace: ArrayLike, window: int) -> FloatArray:
    trace = np.asarray(trace, dtype=np.float64)
    if window < 1:
        raise ValueError("window must be positive.")
    if trace.size < window:
        return np.zeros(0)
    return np.convolve(trace, np.ones(window) / window, mode="valid")


def _check_target(target: EctGrid, config: EctConfig, num_directions: int):
    if not target.config.grid_compatible(config):
        raise ConfigError("Target grid must be computed with the same heights and normalization as the model.")
    if target.shape[0] != num_directions:
        raise ShapeMismatchError(f"Target has {target.shape[0]} curves but the model has {num_directions} directions.")


def _log(console: Optional[Console], step: int, steps: int, loss: float, log_every: int):
    if console is None or log_every <= 0:
        return
    if step % log_every == 0 or step == steps - 1:
        console.print(f"  • step {step:>6}/{steps}: loss={loss:.6e}")


def _log_done(console: Optional[Console], report: FitReport):
    if console is None:
        return
    if report.converged:
        console.print(f"  • [bold green]Converged: final loss {report.final_loss:.6e} after {report.steps_run} steps.")
    else:
        console.print(f"  • Final loss {report.final_loss:.6e} after {report.steps_run} steps.")


def learn_directions(
    complex: GeometricComplex,
    target: EctGrid,
    init: DirectionSet,
    config: EctConfig,
    steps: int = 1000,
    adam: Optional[AdamConfig] = None,
    tolerance: float = 1e-4,
    early_stop: bool = False,
    record_iterates: bool = False,
    console: Optional[Console] = None,
    log_every: int = 100,
) -> FitReport:
    """Fit directions so ``ect_smooth(complex, dirs, config)`` matches ``target``.

    Coordinates stay frozen. Constrained directions are renormalized after
    every update.
    """
    adam = AdamConfig() if adam is None else adam
    _check_target(target, config, len(init))

    dirs = init
    state = adam.init_state(init.directions.shape)
    trace, iterates = [], []
    initial_loss = None

    for step in range(steps):
        loss, upstream = mse_loss(ect_smooth(complex, dirs, config), target)
        if initial_loss is None:
            initial_loss = loss
        if early_stop and loss < tolerance:
            break
        trace.append(loss)
        _log(console, step, steps, loss, log_every)

        grads = ect_smooth_backward(complex, dirs, config, upstream).d_directions
        new, state = adam_step(dirs.directions, grads, state, lr=adam.lr_at(step, steps))
        dirs = dirs.with_directions(new)
        if record_iterates:
            iterates.append(dirs.directions)

    final_loss, _ = mse_loss(ect_smooth(complex, dirs, config), target)
    report = FitReport(
        loss_trace=trace,
        final_params=dirs.directions,
        steps_run=len(trace),
        converged=final_loss < tolerance,
        initial_loss=final_loss if initial_loss is None else initial_loss,
        final_loss=final_loss,
        final_directions=dirs.directions,
        iterates=iterates,
    )
    _log_done(console, report)
    return report


def optimize_pointcloud(
    source: GeometricComplex,
    target: EctGrid,
    dirs: DirectionSet,
    config: EctConfig,
    steps: int = 1000,
    adam: Optional[AdamConfig] = None,
    tolerance: float = 1e-4,
    joint: bool = False,
    early_stop: bool = False,
    record_iterates: bool = False,
    console: Optional[Console] = None,
    log_every: int = 100,
) -> FitReport:
    """Move the points of ``source`` so its smooth ECT matches ``target``.

    ``source`` may have a different number of points than the cloud the target
    was computed from; the normalized grids stay comparable. With ``joint``
    the directions are updated alongside the coordinates.

    Raises
    ------
    NotPointCloudError
        ``source`` has edges or triangles.
    ConfigError
        ``config.normalization`` is ``none``.
    """
    if not source.is_point_cloud:
        raise NotPointCloudError("Only bare point clouds can be optimized; graphs and meshes are not supported.")
    if config.normalization == Normalization.NONE:
        raise ConfigError("Point-cloud fitting needs a normalized ECT so clouds of different sizes are comparable.")
    adam = AdamConfig() if adam is None else adam
    _check_target(target, config, len(dirs))

    cloud = source
    points_state = adam.init_state(source.vertices.shape)
    dirs_state = adam.init_state(dirs.directions.shape)
    trace, iterates = [], []
    initial_loss = None

    for step in range(steps):
        loss, upstream = mse_loss(ect_smooth(cloud, dirs, config), target)
        if initial_loss is None:
            initial_loss = loss
        if early_stop and loss < tolerance:
            break
        trace.append(loss)
        _log(console, step, steps, loss, log_every)

        grads = ect_smooth_backward(cloud, dirs, config, upstream)
        lr = adam.lr_at(step, steps)
        points, points_state = adam_step(cloud.vertices, grads.d_vertices, points_state, lr=lr)
        cloud = cloud.with_vertices(points)
        if joint:
            new_dirs, dirs_state = adam_step(dirs.directions, grads.d_directions, dirs_state, lr=lr)
            dirs = dirs.with_directions(new_dirs)
        if record_iterates:
            iterates.append(cloud.vertices)

    final_loss, _ = mse_loss(ect_smooth(cloud, dirs, config), target)
    report = FitReport(
        loss_trace=trace,
        final_params=cloud.vertices,
        steps_run=len(trace),
        converged=final_loss < tolerance,
        initial_loss=final_loss if initial_loss is None else initial_loss,
        final_loss=final_loss,
        final_directions=dirs.directions,
        iterates=iterates,
    )
    _log_done(console, report)
    return report

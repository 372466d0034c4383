"""Experiment configuration.

Configuration files are flat TOML::

    task = "learn-directions"
    seed = 3
    directions = 8
    lambda = 10.0
    normalize = "vertex"

A ``manifest.json`` written by a previous run is also accepted; its
``config`` object holds the fully resolved configuration of that run.
Keys a task does not set fall back to that task's defaults
(:data:`TASK_DEFAULTS`), then to the field defaults.
"""

import json
from enum import Enum
from pathlib import Path
from typing import Any, Dict, List, Optional

import tomli

from .directions import DirectionSet, clustered_directions, random_directions, uniform_directions
from .ect import EctConfig, EctMode, Normalization, _normalization_alias
from .exceptions import ConfigError
from .models import BaseModel, ValidationError, prevalidator_reuse, root_validator, validator
from .optim import AdamConfig, LrSchedule
from .shapes import ShapeSpec, available_kinds, shapes
from .typing import PathType

try:
    from pydantic.v1 import Field, confloat, conint
except ImportError:
    from pydantic import Field, confloat, conint


class Task(str, Enum):
    COMPUTE = "compute"
    LEARN_DIRECTIONS = "learn-directions"
    OPTIMIZE_POINTCLOUD = "optimize-pointcloud"
    CLASSIFY = "classify"
    BENCHMARK = "benchmark"


class DirectionInit(str, Enum):
    UNIFORM = "uniform"
    CLUSTERED = "clustered"
    RANDOM = "random"


TASK_DEFAULTS: Dict[Task, Dict[str, Any]] = {
    Task.COMPUTE: {
        "directions": 16,
        "mode": EctMode.HARD,
        "normalize": Normalization.NONE,
        "direction_init": DirectionInit.UNIFORM,
    },
    Task.LEARN_DIRECTIONS: {
        "directions": 8,
        "mode": EctMode.SMOOTH,
        "normalize": Normalization.PER_VERTEX_COUNT,
        "direction_init": DirectionInit.CLUSTERED,
        "steps": 1000,
        "lr": 0.001,
    },
    Task.OPTIMIZE_POINTCLOUD: {
        "directions": 16,
        "mode": EctMode.SMOOTH,
        "normalize": Normalization.PER_VERTEX_COUNT,
        "direction_init": DirectionInit.UNIFORM,
        "steps": 2000,
        "lr": 0.01,
    },
    Task.CLASSIFY: {
        "directions": 16,
        "mode": EctMode.SMOOTH,
        "normalize": Normalization.NONE,
        "direction_init": DirectionInit.UNIFORM,
        "lr": 0.001,
    },
    Task.BENCHMARK: {
        "directions": 16,
        "mode": EctMode.SMOOTH,
        "normalize": Normalization.NONE,
        "direction_init": DirectionInit.UNIFORM,
    },
}

# Used where neither the file nor the task defaults set a value.
FALLBACKS: Dict[str, Any] = {"steps": 1000, "lr": 0.001}


def _check_kind(kind: str) -> str:
    if kind.replace("-", "_") not in shapes:
        raise ValueError(f'Unknown shape kind "{kind}"; expected one of {available_kinds()}.')
    return kind


class ExperimentConfig(BaseModel):
    """Everything needed to reproduce one ``dect`` run."""

    task: Task
    seed: int = 0
    out: Path = Path("dect-out")

    # Input complex; a synthetic ``shape`` is generated when absent.
    input: Optional[Path] = None
    input_format: Optional[str] = None
    normalize_input: bool = True
    shape: str = "circle"
    num_points: conint(gt=0) = 64
    noise_sigma: confloat(ge=0) = 0.05

    # Fitting target (learn-directions, optimize-pointcloud).
    target: Optional[Path] = None
    target_shape: str = "two-circles"
    target_num_points: conint(gt=0) = 256

    # Directions and ECT grid.
    directions: Optional[conint(gt=0)] = None
    direction_init: Optional[DirectionInit] = None
    constrained: bool = True
    lambda_: confloat(gt=0) = Field(10.0, alias="lambda")
    heights: conint(ge=2) = 16
    height_min: float = -1.0
    height_max: float = 1.0
    normalize: Optional[Normalization] = None
    mode: Optional[EctMode] = None

    # Optimization.
    steps: Optional[conint(ge=0)] = None
    lr: Optional[confloat(ge=0)] = None
    schedule: LrSchedule = LrSchedule.CONSTANT
    tolerance: confloat(ge=0) = 1e-4
    joint: bool = False
    early_stop: bool = False
    log_every: conint(ge=0) = 100

    # Classification.
    classes: List[str] = ["circle", "two-circles"]
    samples_per_class: conint(gt=0) = 100
    epochs: conint(ge=1) = 100
    batch_size: conint(ge=1) = 32
    learn_directions: bool = True
    pool: str = "mean"
    patience: Optional[conint(ge=1)] = None
    rotate: bool = False
    ablation: bool = False
    ablation_seeds: conint(ge=1) = 10

    # Benchmark.
    benchmark_sizes: List[conint(gt=0)] = [1_000, 10_000, 100_000]
    benchmark_repeats: conint(ge=1) = 3

    ##############
    # VALIDATORS #
    ##############
    _v_normalize_alias = prevalidator_reuse("normalize")(_normalization_alias)

    @validator("shape", "target_shape")
    def shape_registered(cls, v):
        return _check_kind(v)

    @validator("classes")
    def classes_registered(cls, v):
        if len(v) < 2:
            raise ValueError("Classification needs at least two classes.")
        for kind in v:
            _check_kind(kind)
        return v

    @validator("pool")
    def pool_known(cls, v):
        if v not in ("sum", "mean"):
            raise ValueError(f'pool must be "sum" or "mean"; got "{v}".')
        return v

    @validator("height_max")
    def interval_ordered(cls, v, values):
        if "height_min" in values and not values["height_min"] < v:
            raise ValueError(f"height_min must be smaller than height_max; got [{values['height_min']}, {v}].")
        return v

    @root_validator(skip_on_failure=True)
    def task_defaults(cls, values):
        for key, default in {**FALLBACKS, **TASK_DEFAULTS[values["task"]]}.items():
            if values.get(key) is None:
                values[key] = default
        if values["task"] == Task.OPTIMIZE_POINTCLOUD and values["normalize"] == Normalization.NONE:
            raise ValueError("optimize-pointcloud needs a normalized ECT (normalize = vertex or l2).")
        return values

    ############
    # BUILDERS #
    ############
    def ect_config(self) -> EctConfig:
        return EctConfig(
            lambda_=self.lambda_,
            num_heights=self.heights,
            height_interval=(self.height_min, self.height_max),
            normalization=self.normalize,
            mode=self.mode,
        )

    def shape_spec(self, seed: int) -> ShapeSpec:
        return ShapeSpec(kind=self.shape, num_points=self.num_points, noise_sigma=self.noise_sigma, seed=seed)

    def target_spec(self, seed: int) -> ShapeSpec:
        return ShapeSpec(
            kind=self.target_shape, num_points=self.target_num_points, noise_sigma=self.noise_sigma, seed=seed
        )

    def adam_config(self) -> AdamConfig:
        return AdamConfig(lr=self.lr, schedule=self.schedule)

    def direction_set(self, ambient_dim: int, seed: int, init: Optional[DirectionInit] = None) -> DirectionSet:
        init = self.direction_init if init is None else init
        if init == DirectionInit.CLUSTERED:
            return clustered_directions(ambient_dim, self.directions, seed=seed, constrained=self.constrained)
        elif init == DirectionInit.RANDOM:
            return random_directions(ambient_dim, self.directions, seed=seed, constrained=self.constrained)
        return uniform_directions(ambient_dim, self.directions, seed=seed, constrained=self.constrained)

    def check_paths(self):
        """Raise :class:`ConfigError` if a configured input file does not exist."""
        for name in ("input", "target"):
            path = getattr(self, name)
            if path is not None and not path.exists():
                raise ConfigError(f'{name} file "{path}" does not exist.')

    def echo(self) -> Dict[str, Any]:
        """JSON-compatible dump that :func:`load_config_data` accepts back."""
        return json.loads(self.json(by_alias=True))


def load_config_data(path: PathType) -> Dict[str, Any]:
    """Raw key/value pairs of a TOML config file or a run manifest."""
    path = Path(path)
    try:
        with path.open("rb") as f:
            if path.suffix.lower() == ".json":
                data = json.load(f)
                data = data.get("config", data)
            else:
                data = tomli.load(f)
    except OSError as e:
        raise ConfigError(f'Cannot read config file "{path}": {e}') from e
    except (tomli.TOMLDecodeError, json.JSONDecodeError) as e:
        raise ConfigError(f'Cannot parse config file "{path}": {e}') from e

    nested = [key for key, value in data.items() if isinstance(value, dict)]
    if nested:
        raise ConfigError(f"Config files are flat key/value; found tables {nested}.")
    return data


def build_config(data: Optional[Dict[str, Any]] = None, **overrides) -> ExperimentConfig:
    """Merge ``overrides`` (``None`` values are ignored) into ``data`` and validate.

    Raises
    ------
    ConfigError
        Unknown keys or invalid values; the message lists every problem.
    """
    merged = dict(data or {})
    if "lambda_" in overrides:
        overrides["lambda"] = overrides.pop("lambda_")
    merged.update({key: value for key, value in overrides.items() if value is not None})
    try:
        return ExperimentConfig(**merged)
    except ValidationError as e:
        problems = "; ".join(f"{'.'.join(str(x) for x in err['loc'])}: {err['msg']}" for err in e.errors())
        raise ConfigError(f"Invalid configuration: {problems}") from e

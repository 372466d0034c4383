"""Run one configured task end to end and record it in ``manifest.json``."""

import contextlib
import json
import platform
import time
from pathlib import Path
from typing import Any, Dict, Iterator, Optional

import numpy as np
from autoregistry import Registry
from rich.console import Console

from . import __version__, seeding
from .benchmark import benchmark
from .classify import checkpoint
from .classify.datasets import make_dataset, split_dataset
from .classify.model import ClassifierModel, Pool
from .classify.train import TrainRun, evaluate, run_ablation, train
from .complex import GeometricComplex, euler_characteristic, normalize
from .config import DirectionInit, ExperimentConfig
from .directions import DirectionSet
from .ect import EctConfig, EctGrid, EctMode, Normalization, compute_ect, ect_smooth
from .exceptions import DectException
from .formats import load_complex, write_directions, write_ect, write_points, write_table, write_trace
from .grad import ect_smooth_backward, finite_difference_oracle, gradient_relative_error
from .optim import learn_directions, moving_average, mse_loss, optimize_pointcloud
from .shapes import generate
from .utils import atomic_write

# Tasks should have function signature
#    def task_<name>(config: ExperimentConfig, manifest: Manifest, console: Console) -> None
tasks = Registry(prefix="task_")

MANIFEST_NAME = "manifest.json"
TREND_WINDOW = 100
# Rise allowed between consecutive moving-average values, relative to the first one.
TREND_SLACK = 1e-3
# The finite-difference self-check costs two forward passes per coordinate.
GRADIENT_CHECK_MAX_VERTICES = 256


class Manifest:
    """Accumulates what a run did; written to ``<out>/manifest.json``."""

    def __init__(self, config: ExperimentConfig, console: Console):
        self.config = config
        self.console = console
        self.phases: Dict[str, float] = {}
        self.results: Dict[str, Any] = {}
        self.artifacts: Dict[str, str] = {}
        self.status = "running"
        self.error: Optional[str] = None

    @contextlib.contextmanager
    def phase(self, name: str) -> Iterator[None]:
        """Time a phase; shows a spinner while it runs."""
        start = time.perf_counter()
        try:
            with self.console.status(f"[bold]{name}..."):
                yield
        finally:
            self.phases[name] = time.perf_counter() - start

    def artifact(self, key: str, name: str) -> Path:
        """Output path for artifact ``key``, registered in the manifest."""
        self.artifacts[key] = name
        return self.config.out / name

    def to_dict(self) -> Dict[str, Any]:
        return {
            "version": __version__,
            "python": platform.python_version(),
            "numpy": np.__version__,
            "task": self.config.task.value,
            "seed": self.config.seed,
            "status": self.status,
            "error": self.error,
            "config": self.config.echo(),
            "phases": self.phases,
            "results": self.results,
            "artifacts": self.artifacts,
        }

    def write(self):
        with atomic_write(self.config.out / MANIFEST_NAME) as f:
            json.dump(self.to_dict(), f, indent=2, default=_json_default)
            f.write("\n")


def _json_default(obj):
    if isinstance(obj, np.generic):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    raise TypeError(f"{type(obj).__name__} is not JSON serializable")


def _source_complex(config: ExperimentConfig) -> GeometricComplex:
    if config.input is not None:
        return load_complex(config.input, config.input_format, config.normalize_input)
    return generate(config.shape_spec(seeding.subseed(config.seed, seeding.DATA)))


def _target_complex(config: ExperimentConfig) -> GeometricComplex:
    if config.target is not None:
        return load_complex(config.target, None, config.normalize_input)
    return generate(config.target_spec(seeding.subseed(config.seed, seeding.DATA)))


@tasks
def task_compute(config: ExperimentConfig, manifest: Manifest, console: Console):
    with manifest.phase("setup"):
        complex = _source_complex(config)
        dirs = config.direction_set(complex.ambient_dim, seeding.subseed(config.seed, seeding.INIT))
        ect_config = config.ect_config()

    with manifest.phase("compute"):
        grid = compute_ect(complex, dirs, ect_config)

    with manifest.phase("write"):
        write_ect(grid, manifest.artifact("ect", "ect.csv"))
        write_ect(grid, manifest.artifact("ect_image", "ect.pgm"), "pgm")
        write_directions(dirs, manifest.artifact("directions", "directions.csv"))

    chi = euler_characteristic(complex)
    manifest.results.update(
        num_vertices=complex.num_vertices,
        num_edges=complex.num_edges,
        num_triangles=complex.num_triangles,
        euler_characteristic=chi,
        grid_shape=list(grid.shape),
    )
    # Above every simplex height the hard, un-normalized ECT equals chi.
    top = float(np.linalg.norm(complex.vertices, axis=1).max()) if complex.num_vertices else 0.0
    if (
        ect_config.mode == EctMode.HARD
        and ect_config.normalization == Normalization.NONE
        and dirs.constrained
        and ect_config.height_interval[1] >= top
    ):
        manifest.results["ect_top_equals_chi"] = bool(np.all(grid.values[:, -1] == chi))
    console.print(f"χ = {chi}  ({complex.num_vertices} V, {complex.num_edges} E, {complex.num_triangles} T)")


def _gradient_check(
    complex: GeometricComplex, init: DirectionSet, target: EctGrid, ect_config: EctConfig
) -> Optional[float]:
    """Relative error of the analytic gradients against central differences at the starting point."""
    if complex.num_vertices > GRADIENT_CHECK_MAX_VERTICES:
        return None
    _, upstream = mse_loss(ect_smooth(complex, init, ect_config), target)
    analytic = ect_smooth_backward(complex, init, ect_config, upstream)
    oracle = finite_difference_oracle(complex, init, ect_config, upstream)
    return max(
        gradient_relative_error(analytic.d_vertices, oracle.d_vertices),
        gradient_relative_error(analytic.d_directions, oracle.d_directions),
    )


def _trend_decreasing(trace) -> Optional[bool]:
    averaged = moving_average(trace, min(TREND_WINDOW, max(1, len(trace))))
    if averaged.size == 0:
        return None
    rises = np.diff(averaged)
    return bool(np.all(rises <= TREND_SLACK * abs(averaged[0])))


@tasks
def task_learn_directions(config: ExperimentConfig, manifest: Manifest, console: Console):
    with manifest.phase("setup"):
        complex = _source_complex(config)
        ect_config = config.ect_config()
        n = complex.ambient_dim
        target_dirs = config.direction_set(n, seeding.subseed(config.seed, seeding.DATA), DirectionInit.UNIFORM)
        init = config.direction_set(n, seeding.subseed(config.seed, seeding.INIT))
        target = ect_smooth(complex, target_dirs, ect_config)

    with manifest.phase("gradient-check"):
        gradient_error = _gradient_check(complex, init, target, ect_config)

    with manifest.phase("fit"):
        report = learn_directions(
            complex,
            target,
            init,
            ect_config,
            steps=config.steps,
            adam=config.adam_config(),
            tolerance=config.tolerance,
            early_stop=config.early_stop,
            console=console,
            log_every=config.log_every,
        )

    with manifest.phase("write"):
        write_trace(report.loss_trace, manifest.artifact("trace", "trace.csv"))
        write_directions(init, manifest.artifact("initial_directions", "initial_directions.csv"))
        write_directions(target_dirs, manifest.artifact("target_directions", "target_directions.csv"))
        write_points(report.final_directions, manifest.artifact("directions", "directions.csv"))
        write_ect(target, manifest.artifact("ect_target", "ect_target.csv"))
        final_dirs = init.with_directions(report.final_directions)
        write_ect(ect_smooth(complex, final_dirs, ect_config), manifest.artifact("ect_final", "ect_final.csv"))

    norms = np.linalg.norm(report.final_directions, axis=1)
    manifest.results.update(
        initial_loss=report.initial_loss,
        final_loss=report.final_loss,
        steps_run=report.steps_run,
        converged=report.converged,
        max_unit_norm_deviation=float(np.max(np.abs(norms - 1.0))),
        gradient_relative_error=gradient_error,
        trend_decreasing=_trend_decreasing(report.loss_trace),
    )


def _pearson(a: np.ndarray, b: np.ndarray) -> Optional[float]:
    a, b = a.ravel(), b.ravel()
    if np.std(a) == 0 or np.std(b) == 0:
        return None
    return float(np.corrcoef(a, b)[0, 1])


@tasks
def task_optimize_pointcloud(config: ExperimentConfig, manifest: Manifest, console: Console):
    with manifest.phase("setup"):
        target_complex = _target_complex(config)
        n = target_complex.ambient_dim
        if config.input is not None:
            source = _source_complex(config)
        else:
            rng = seeding.substream(config.seed, seeding.INIT)
            source = normalize(GeometricComplex(rng.uniform(-1.0, 1.0, size=(config.num_points, n))))
        dirs = config.direction_set(n, seeding.subseed(config.seed, seeding.INIT))
        ect_config = config.ect_config()
        target = ect_smooth(target_complex, dirs, ect_config)

    with manifest.phase("fit"):
        report = optimize_pointcloud(
            source,
            target,
            dirs,
            ect_config,
            steps=config.steps,
            adam=config.adam_config(),
            tolerance=config.tolerance,
            joint=config.joint,
            early_stop=config.early_stop,
            console=console,
            log_every=config.log_every,
        )

    with manifest.phase("write"):
        write_trace(report.loss_trace, manifest.artifact("trace", "trace.csv"))
        write_points(source.vertices, manifest.artifact("initial_points", "initial_points.csv"))
        write_points(report.final_params, manifest.artifact("points", "points.csv"))
        write_points(target_complex.vertices, manifest.artifact("target_points", "target_points.csv"))
        write_points(report.final_directions, manifest.artifact("directions", "directions.csv"))

    fitted = source.with_vertices(report.final_params)
    fitted_dirs = dirs.with_directions(report.final_directions)
    hard = ect_config.with_mode(EctMode.HARD)
    manifest.results.update(
        initial_loss=report.initial_loss,
        final_loss=report.final_loss,
        steps_run=report.steps_run,
        converged=report.converged,
        hard_ect_correlation=_pearson(
            compute_ect(fitted, fitted_dirs, hard).values,
            compute_ect(target_complex, fitted_dirs, hard).values,
        ),
        trend_decreasing=_trend_decreasing(report.loss_trace),
    )


def _train_run(config: ExperimentConfig) -> TrainRun:
    return TrainRun(
        seed=config.seed,
        epochs=config.epochs,
        batch_size=config.batch_size,
        lr=config.lr,
        learn_directions=config.learn_directions,
        patience=config.patience,
    )


@tasks
def task_classify(config: ExperimentConfig, manifest: Manifest, console: Console):
    with manifest.phase("setup"):
        dataset = make_dataset(
            config.classes,
            config.samples_per_class,
            num_points=config.num_points,
            noise_sigma=config.noise_sigma,
            seed=seeding.subseed(config.seed, seeding.DATA),
            rotate=config.rotate,
        )
        ect_config = config.ect_config()
        n = dataset[0].complex.ambient_dim

    if config.ablation:
        seeds = list(range(config.seed, config.seed + config.ablation_seeds))
        with manifest.phase("ablation"):
            report = run_ablation(
                dataset, seeds, _train_run(config), num_directions=config.directions, ect_config=ect_config, console=console
            )
        with manifest.phase("write"):
            rows = zip(report.seeds, report.fixed, report.learned)
            write_table(manifest.artifact("ablation", "ablation.csv"), ("seed", "fixed", "learned"), rows)
        manifest.results.update(mean_accuracy_fixed=report.mean_fixed, mean_accuracy_learned=report.mean_learned)
        console.print(f"fixed: {report.mean_fixed:.3f}  learned: {report.mean_learned:.3f}")
        return

    with manifest.phase("split"):
        split = split_dataset(dataset, seed=seeding.subseed(config.seed, seeding.SHUFFLE))
        model = ClassifierModel.init(
            n,
            len(config.classes),
            ect_config=ect_config,
            pool=Pool(config.pool),
            rng=seeding.substream(config.seed, seeding.INIT),
            directions=config.direction_set(n, seeding.subseed(config.seed, seeding.INIT)),
        )

    with manifest.phase("train"):
        model, trained = train(model, split.train, _train_run(config), validation=split.validation, console=console)

    with manifest.phase("evaluate"):
        accuracy = evaluate(model, split.test)

    with manifest.phase("write"):
        checkpoint.save(model, manifest.artifact("checkpoint", "model.dectckpt"))
        write_directions(model.directions, manifest.artifact("directions", "directions.csv"))
        fields = ("epoch", "train_loss", "train_accuracy", "val_loss", "val_accuracy")
        write_table(
            manifest.artifact("metrics", "metrics.csv"),
            fields,
            ([getattr(m, f) for f in fields] for m in trained.metrics),
        )

    manifest.results.update(test_accuracy=accuracy, epochs_run=len(trained.metrics))
    console.print(f"test accuracy: {accuracy:.3f}")


@tasks
def task_benchmark(config: ExperimentConfig, manifest: Manifest, console: Console):
    with manifest.phase("setup"):
        dirs = config.direction_set(2, seeding.subseed(config.seed, seeding.INIT))
        ect_config = config.ect_config()

    with manifest.phase("benchmark"):
        report = benchmark(
            config.benchmark_sizes,
            dirs,
            ect_config,
            repeats=config.benchmark_repeats,
            seed=seeding.subseed(config.seed, seeding.DATA),
            console=console,
        )

    with manifest.phase("write"):
        rows = ((r.num_points, r.num_directions, r.seconds) for r in report.rows)
        write_table(manifest.artifact("timings", "timings.csv"), ("num_points", "num_directions", "seconds"), rows)

    manifest.results.update(scaling_slope=report.slope)
    if report.slope is not None:
        console.print(f"log-log scaling slope: {report.slope:.3f}")


def run(config: ExperimentConfig, console: Optional[Console] = None) -> int:
    """Execute ``config.task``; returns a process exit code.

    Failures are reported on ``console`` and recorded in the manifest
    instead of propagating.
    """
    console = Console() if console is None else console
    manifest = Manifest(config, console)
    try:
        config.check_paths()
        config.out.mkdir(parents=True, exist_ok=True)
        tasks[config.task.value.replace("-", "_")](config, manifest, console)
    except (DectException, OSError) as e:
        manifest.status = "failed"
        manifest.error = f"{type(e).__name__}: {e}"
        console.print(f"[bold red]Error:[/bold red] {e}")
        if config.out.is_dir():
            manifest.write()
        return 1

    manifest.status = "ok"
    manifest.write()
    console.print(f"[bold green]Done.[/bold green] Results in {config.out}")
    return 0

import json

import pytest

from dect.config import (
    TASK_DEFAULTS,
    DirectionInit,
    ExperimentConfig,
    Task,
    build_config,
    load_config_data,
)
from dect.ect import EctMode, Normalization
from dect.exceptions import ConfigError
from dect.optim import LrSchedule


@pytest.mark.parametrize("task", list(Task))
def test_task_defaults_applied(task):
    config = build_config(task=task.value)
    for key, value in TASK_DEFAULTS[task].items():
        assert getattr(config, key) == value
    assert config.steps is not None
    assert config.lr is not None


def test_learn_directions_defaults():
    config = build_config(task="learn-directions")
    assert config.directions == 8
    assert config.direction_init == DirectionInit.CLUSTERED
    assert config.normalize == Normalization.PER_VERTEX_COUNT
    assert (config.steps, config.lr) == (1000, 0.001)


@pytest.mark.parametrize("task", ["learn-directions", "optimize-pointcloud"])
def test_convergence_tolerance_default(task):
    config = build_config(task=task)
    assert config.tolerance == 1e-4
    assert config.early_stop is False


def test_explicit_values_beat_task_defaults():
    config = build_config({"task": "compute", "mode": "smooth"}, directions=4)
    assert config.mode == EctMode.SMOOTH
    assert config.directions == 4


def test_none_overrides_ignored():
    config = build_config({"task": "compute", "directions": 4}, directions=None, seed=None)
    assert config.directions == 4
    assert config.seed == 0


def test_lambda_alias():
    assert build_config(task="compute", lambda_=3.0).lambda_ == 3.0
    assert build_config({"task": "compute", "lambda": 2.0}).lambda_ == 2.0


def test_normalize_aliases():
    assert build_config(task="compute", normalize="vertex").normalize == Normalization.PER_VERTEX_COUNT
    assert build_config(task="compute", normalize="L2").normalize == Normalization.UNIT_L2


@pytest.mark.parametrize(
    "data",
    [
        {"task": "nope"},
        {"task": "compute", "unknown_key": 1},
        {"task": "compute", "directions": 0},
        {"task": "compute", "shape": "dodecahedron"},
        {"task": "compute", "height_min": 1.0, "height_max": -1.0},
        {"task": "classify", "classes": ["circle"]},
        {"task": "classify", "pool": "max"},
        {"task": "optimize-pointcloud", "normalize": "none"},
        {"task": "compute", "lambda": 0.0},
    ],
)
def test_invalid(data):
    with pytest.raises(ConfigError):
        build_config(data)


def test_error_lists_problems():
    with pytest.raises(ConfigError) as e:
        build_config({"task": "compute", "heights": 1, "num_points": 0})
    assert "heights" in str(e.value)
    assert "num_points" in str(e.value)


def test_ect_config():
    config = build_config(task="learn-directions", heights=8, height_min=-2.0, height_max=2.0, lambda_=5.0)
    ect = config.ect_config()
    assert ect.num_heights == 8
    assert ect.height_interval == (-2.0, 2.0)
    assert ect.lambda_ == 5.0
    assert ect.mode == EctMode.SMOOTH
    assert ect.normalization == Normalization.PER_VERTEX_COUNT


def test_adam_config():
    adam = build_config(task="optimize-pointcloud", schedule="cosine").adam_config()
    assert adam.lr == 0.01
    assert adam.schedule == LrSchedule.COSINE


@pytest.mark.parametrize("init", list(DirectionInit))
def test_direction_set(init):
    config = build_config(task="compute", directions=5, direction_init=init.value, constrained=False)
    dirs = config.direction_set(3, seed=1)
    assert dirs.directions.shape == (5, 3)
    assert not dirs.constrained


def test_check_paths(tmp_path):
    build_config(task="compute").check_paths()
    with pytest.raises(ConfigError):
        build_config(task="compute", input=tmp_path / "missing.off").check_paths()


def test_load_toml(tmp_path):
    path = tmp_path / "run.toml"
    path.write_text('task = "learn-directions"\nseed = 3\nlambda = 4.0\nnormalize = "l2"\n')
    config = build_config(load_config_data(path))
    assert config.seed == 3
    assert config.lambda_ == 4.0
    assert config.normalize == Normalization.UNIT_L2


def test_load_nested_toml_rejected(tmp_path):
    path = tmp_path / "run.toml"
    path.write_text('task = "compute"\n[extra]\nx = 1\n')
    with pytest.raises(ConfigError, match="flat"):
        load_config_data(path)


def test_load_bad_toml(tmp_path):
    path = tmp_path / "run.toml"
    path.write_text("task = \n")
    with pytest.raises(ConfigError):
        load_config_data(path)


def test_load_missing(tmp_path):
    with pytest.raises(ConfigError):
        load_config_data(tmp_path / "missing.toml")


def test_manifest_echo_reproduces_config(tmp_path):
    config = build_config(task="learn-directions", seed=9, lambda_=7.0, out=tmp_path / "run")
    path = tmp_path / "manifest.json"
    path.write_text(json.dumps({"version": "0.0.0", "config": config.echo()}))
    assert build_config(load_config_data(path)) == config


def test_config_is_immutable():
    config = build_config(task="compute")
    with pytest.raises(TypeError):
        config.seed = 4
    assert isinstance(config, ExperimentConfig)

from dect.config import Task
from dect.ect import EctMode, Normalization


def test_compute_overrides(mocker, cli_runner, tmp_path):
    run = mocker.patch("dect.cli.common.run", return_value=0)
    result = cli_runner(
        "compute",
        "--shape",
        "octahedron",
        "--mode",
        "smooth",
        "--directions",
        "4",
        "--heights",
        "8",
        "--lambda",
        "2.5",
        "--seed",
        "3",
        "--normalize",
        "vertex",
        "--constrained",
        "false",
        "--out",
        str(tmp_path),
    )
    assert result.exit_code == 0
    config = run.call_args[0][0]
    assert config.task == Task.COMPUTE
    assert config.shape == "octahedron"
    assert config.mode == EctMode.SMOOTH
    assert (config.directions, config.heights, config.lambda_, config.seed) == (4, 8, 2.5, 3)
    assert config.normalize == Normalization.PER_VERTEX_COUNT
    assert config.constrained is False
    assert config.out == tmp_path


def test_compute_task_defaults(mocker, cli_runner):
    run = mocker.patch("dect.cli.common.run", return_value=0)
    assert cli_runner("compute").exit_code == 0
    config = run.call_args[0][0]
    assert config.mode == EctMode.HARD
    assert config.normalize == Normalization.NONE


def test_config_file_with_override(mocker, cli_runner, tmp_path):
    run = mocker.patch("dect.cli.common.run", return_value=0)
    path = tmp_path / "run.toml"
    path.write_text("seed = 3\ndirections = 5\n")
    assert cli_runner("compute", "-c", str(path), "--directions", "7").exit_code == 0
    config = run.call_args[0][0]
    assert (config.seed, config.directions) == (3, 7)


def test_raw_input_flag(mocker, cli_runner):
    run = mocker.patch("dect.cli.common.run", return_value=0)
    assert cli_runner("compute").exit_code == 0
    assert run.call_args[0][0].normalize_input is True
    assert cli_runner("compute", "--raw-input").exit_code == 0
    assert run.call_args[0][0].normalize_input is False


def test_raw_input_flag_beats_config_file(mocker, cli_runner, tmp_path):
    run = mocker.patch("dect.cli.common.run", return_value=0)
    path = tmp_path / "run.toml"
    path.write_text("normalize_input = false\n")
    assert cli_runner("compute", "-c", str(path), "--normalize-input").exit_code == 0
    assert run.call_args[0][0].normalize_input is True


def test_run_exit_code_forwarded(mocker, cli_runner):
    mocker.patch("dect.cli.common.run", return_value=1)
    assert cli_runner("compute").exit_code == 1


def test_invalid_value(mocker, cli_runner):
    run = mocker.patch("dect.cli.common.run")
    result = cli_runner("compute", "--directions", "0")
    assert result.exit_code == 1
    assert "Error" in result.output
    assert "directions" in result.output
    run.assert_not_called()


def test_invalid_constrained(mocker, cli_runner):
    mocker.patch("dect.cli.common.run")
    assert cli_runner("compute", "--constrained", "maybe").exit_code == 2


def test_compute_end_to_end(cli_runner, tmp_path):
    mesh = tmp_path / "octahedron.off"
    assert cli_runner("generate", "octahedron", str(mesh)).exit_code == 0
    out = tmp_path / "run"
    result = cli_runner("compute", "-i", str(mesh), "--directions", "3", "--out", str(out))
    assert result.exit_code == 0
    assert "χ = 2" in result.output
    assert (out / "ect.csv").is_file()
    assert (out / "manifest.json").is_file()

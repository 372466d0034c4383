import os
import shutil
from pathlib import Path

import numpy as np
import pytest
from typer.testing import CliRunner

from dect.cli import app
from dect.utils import env_parse_bool


@pytest.fixture(autouse=True)
def restore_cwd():
    cwd = Path.cwd()
    yield
    os.chdir(cwd)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def cli_runner():
    cli_runner = CliRunner()

    def run(cmd, *args):
        return cli_runner.invoke(app, [cmd, *args])

    return run


@pytest.fixture
def data_path(tmp_path, request):
    """Temporary copy of folder with same name as test module.

    Fixture responsible for searching a folder with the same name of test
    module and, if available, copying all contents to a temporary directory so
    tests can use them freely.
    """
    filename = Path(request.module.__file__)
    test_dir = filename.parent / filename.stem
    if test_dir.is_dir():
        shutil.copytree(test_dir, tmp_path, dirs_exist_ok=True)

    return tmp_path


def pytest_addoption(parser):
    parser.addoption(
        "--slow",
        action="store_true",
        help="Include acceptance-scale tests (marked with marker @slow)",
    )


def pytest_runtest_setup(item):
    if "slow" in item.keywords and not (item.config.getoption("--slow") or env_parse_bool("DECT_SLOW_TESTS")):
        pytest.skip("need --slow option (or DECT_SLOW_TESTS=1) to run this test")

import typer
from typer import Option

import dect
from dect.cli.benchmark import benchmark
from dect.cli.classify import classify
from dect.cli.compute import compute
from dect.cli.generate import generate_shape
from dect.cli.info import info
from dect.cli.learn import learn_directions, optimize_pointcloud

app = typer.Typer(no_args_is_help=True, pretty_exceptions_enable=False)

app.command()(benchmark)
app.command()(classify)
app.command()(compute)
app.command(name="generate")(generate_shape)
app.command()(info)
app.command(name="learn-directions")(learn_directions)
app.command(name="optimize-pointcloud")(optimize_pointcloud)


def run_app(*args, **kwargs):
    app(*args, **kwargs)


def version_callback(value: bool):
    if not value:
        return
    print(dect.__version__)
    raise typer.Exit()


@app.callback()
def common(
    ctx: typer.Context,
    version: bool = Option(
        None,
        "--version",
        "-v",
        callback=version_callback,
        help="Display dect's version.",
    ),
):
    pass

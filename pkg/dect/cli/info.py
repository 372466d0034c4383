from pathlib import Path
from typing import Optional

import typer
from typer import Argument, Option

from dect.cli.common import console, remove_stacktrace
from dect.complex import euler_characteristic, validate
from dect.formats import load_complex


def info(
    path: Path = Argument(..., help="Complex file."),
    format: Optional[str] = Option(None, help="off, edgelist or csv-points."),
):
    """Display counts, Euler characteristic and validation problems of a complex file."""
    with remove_stacktrace():
        complex = load_complex(path, format, normalize_vertices=False, check=False)
    report = validate(complex)
    console.print(
        f"{complex.num_vertices} vertices, {complex.num_edges} edges, {complex.num_triangles} triangles "
        f"in R^{complex.ambient_dim}; χ = {euler_characteristic(complex)}"
    )
    for violation in report:
        console.print(f"  • [yellow]{violation.kind}[/yellow]: {violation.message}")
    if report:
        raise typer.Exit(1)

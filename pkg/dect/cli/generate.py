from pathlib import Path
from typing import Optional

from typer import Argument, Option

from dect.cli.common import console, remove_stacktrace
from dect.exceptions import ConfigError
from dect.formats import write_complex
from dect.models import ValidationError
from dect.shapes import ShapeSpec, generate


def generate_shape(
    kind: str = Argument(..., help="Shape kind, like circle, two-circles or octahedron."),
    output: Path = Argument(..., help="Destination file; format is inferred from the suffix."),
    num_points: int = Option(64, help="Number of sampled points (point-cloud kinds)."),
    noise: float = Option(0.0, help="Standard deviation of Gaussian vertex noise."),
    seed: int = Option(0, help="Shape seed."),
    format: Optional[str] = Option(None, help="off, edgelist or csv-points."),
):
    """Write a seeded synthetic shape to a file."""
    with remove_stacktrace():
        try:
            spec = ShapeSpec(kind=kind, num_points=num_points, noise_sigma=noise, seed=seed)
        except ValidationError as e:
            problems = "; ".join(err["msg"] for err in e.errors())
            raise ConfigError(f"Invalid shape: {problems}") from e
        complex = generate(spec)
        write_complex(complex, output, format)
    console.print(f"Wrote {complex.num_vertices} vertices, {complex.num_edges} edges, {complex.num_triangles} triangles to {output}")

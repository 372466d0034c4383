"""Seeded synthetic shapes.

Generators are registered by name in :data:`shapes`. Each generator receives
the :class:`ShapeSpec` and a ``numpy`` generator and returns an *un-normalized*
complex; :func:`generate` adds isotropic Gaussian noise and normalizes.
"""

import itertools
import math

import numpy as np
from autoregistry import Registry

from .complex import GeometricComplex, normalize
from .exceptions import UnknownShapeError
from .models import BaseModel, validator

try:
    from pydantic.v1 import confloat, conint
except ImportError:
    from pydantic import confloat, conint

# Generators should have function signature
#    def generator(spec: ShapeSpec, rng: np.random.Generator) -> GeometricComplex
# Registry keys are the function names; shape kinds use dashes instead of underscores.
shapes = Registry()


def _registry_key(kind: str) -> str:
    return kind.replace("-", "_")


def available_kinds():
    return sorted(key.replace("_", "-") for key in shapes.keys())


class ShapeSpec(BaseModel):
    """Recipe for a synthetic complex."""

    kind: str
    num_points: conint(gt=0) = 64
    noise_sigma: confloat(ge=0) = 0.0
    seed: int = 0

    @validator("kind")
    def kind_registered(cls, v):
        if _registry_key(v) not in shapes:
            raise ValueError(f'Unknown shape kind "{v}"; expected one of {available_kinds()}.')
        return v


def _ring(num_points: int, center, radius: float, rng: np.random.Generator) -> np.ndarray:
    phase = rng.uniform(0.0, 2 * np.pi)
    angles = phase + 2 * np.pi * np.arange(num_points) / max(num_points, 1)
    return np.asarray(center) + radius * np.column_stack([np.cos(angles), np.sin(angles)])


@shapes
def circle(spec: ShapeSpec, rng: np.random.Generator) -> GeometricComplex:
    """Equally spaced points on the unit circle, random phase."""
    return GeometricComplex(_ring(spec.num_points, (0.0, 0.0), 1.0, rng))


@shapes
def two_circles(spec: ShapeSpec, rng: np.random.Generator) -> GeometricComplex:
    """Two disjoint unit circles side by side along the x axis."""
    first = math.ceil(spec.num_points / 2)
    second = spec.num_points - first
    points = [_ring(first, (-1.5, 0.0), 1.0, rng)]
    if second:
        points.append(_ring(second, (1.5, 0.0), 1.0, rng))
    return GeometricComplex(np.vstack(points))


@shapes
def square_cycle(spec: ShapeSpec, rng: np.random.Generator) -> GeometricComplex:
    """4-cycle graph on the unit vectors of the coordinate axes."""
    vertices = [(1.0, 0.0), (0.0, 1.0), (-1.0, 0.0), (0.0, -1.0)]
    edges = [(0, 1), (1, 2), (2, 3), (3, 0)]
    return GeometricComplex(vertices, edges)


@shapes
def filled_triangle(spec: ShapeSpec, rng: np.random.Generator) -> GeometricComplex:
    """Equilateral 2-simplex with all of its faces."""
    angles = np.pi / 2 + 2 * np.pi * np.arange(3) / 3
    vertices = np.column_stack([np.cos(angles), np.sin(angles)])
    return GeometricComplex(vertices, [(0, 1), (1, 2), (0, 2)], [(0, 1, 2)])


@shapes
def octahedron(spec: ShapeSpec, rng: np.random.Generator) -> GeometricComplex:
    """Boundary of the regular octahedron (a triangulated 2-sphere)."""
    vertices = np.vstack([np.eye(3), -np.eye(3)])  # vertex i and i + 3 are antipodal
    edges = [(i, j) for i, j in itertools.combinations(range(6), 2) if j != i + 3]
    triangles = [(a, b, c) for a, b, c in itertools.product((0, 3), (1, 4), (2, 5))]
    return GeometricComplex(vertices, edges, triangles)


@shapes
def uniform_blob(spec: ShapeSpec, rng: np.random.Generator) -> GeometricComplex:
    """Uniform samples from the square ``[-1, 1]^2``."""
    return GeometricComplex(rng.uniform(-1.0, 1.0, size=(spec.num_points, 2)))


@shapes
def sphere_cloud(spec: ShapeSpec, rng: np.random.Generator) -> GeometricComplex:
    """Uniform samples from the unit sphere in ``R^3``."""
    points = rng.standard_normal((spec.num_points, 3))
    points /= np.linalg.norm(points, axis=1, keepdims=True)
    return GeometricComplex(points)


def generate(spec: ShapeSpec) -> GeometricComplex:
    """Build, perturb and normalize the complex described by ``spec``.

    The same ``spec`` always produces a bitwise-identical complex.
    """
    try:
        generator = shapes[_registry_key(spec.kind)]
    except KeyError:
        raise UnknownShapeError(f'Unknown shape kind "{spec.kind}".') from None

    rng = np.random.default_rng(spec.seed)
    complex = generator(spec, rng)
    if spec.noise_sigma > 0:
        noise = rng.normal(0.0, spec.noise_sigma, size=complex.vertices.shape)
        complex = complex.with_vertices(complex.vertices + noise)
    return normalize(complex)

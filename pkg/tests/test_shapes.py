import numpy as np
import pytest

from dect.complex import euler_characteristic, validate
from dect.exceptions import UnknownShapeError
from dect.shapes import ShapeSpec, available_kinds, generate

try:
    from pydantic.v1 import ValidationError
except ImportError:
    from pydantic import ValidationError


def test_available_kinds():
    kinds = available_kinds()
    for kind in ("circle", "two-circles", "square-cycle", "filled-triangle", "octahedron", "uniform-blob", "sphere-cloud"):
        assert kind in kinds


def test_circle_noiseless():
    complex = generate(ShapeSpec(kind="circle", num_points=64, noise_sigma=0, seed=0))
    assert complex.num_vertices == 64
    assert complex.is_point_cloud
    np.testing.assert_allclose(np.linalg.norm(complex.vertices, axis=1), 1.0, atol=1e-12)


def test_square_cycle():
    complex = generate(ShapeSpec(kind="square-cycle"))
    assert (complex.num_vertices, complex.num_edges, complex.num_triangles) == (4, 4, 0)
    assert euler_characteristic(complex) == 0


def test_octahedron():
    complex = generate(ShapeSpec(kind="octahedron"))
    assert (complex.num_vertices, complex.num_edges, complex.num_triangles) == (6, 12, 8)
    assert complex.ambient_dim == 3


@pytest.mark.parametrize("kind", available_kinds())
def test_generate_valid_normalized_reproducible(kind):
    spec = ShapeSpec(kind=kind, num_points=32, noise_sigma=0.05, seed=7)
    complex = generate(spec)
    assert validate(complex) == []
    np.testing.assert_allclose(complex.vertices.mean(axis=0), 0, atol=1e-12)
    assert np.linalg.norm(complex.vertices, axis=1).max() <= 1.0 + 1e-12
    again = generate(spec)
    assert np.array_equal(again.vertices, complex.vertices)
    assert np.array_equal(again.edges, complex.edges)


def test_generate_seed_changes_noise():
    a = generate(ShapeSpec(kind="circle", noise_sigma=0.1, seed=1))
    b = generate(ShapeSpec(kind="circle", noise_sigma=0.1, seed=2))
    assert not np.array_equal(a.vertices, b.vertices)


def test_unknown_kind_rejected():
    with pytest.raises(ValidationError):
        ShapeSpec(kind="torus")


def test_generate_unknown_kind_error():
    spec = ShapeSpec.construct(kind="torus", num_points=4, noise_sigma=0.0, seed=0)
    with pytest.raises(UnknownShapeError):
        generate(spec)


def test_shape_spec_immutable():
    spec = ShapeSpec(kind="circle")
    with pytest.raises(TypeError):
        spec.num_points = 3

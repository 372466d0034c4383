import numpy as np
import pytest

from dect.complex import GeometricComplex, SimplexDim, euler_characteristic, normalize, validate
from dect.exceptions import DegenerateSimplexError, DimensionMismatchError, EmptyComplexError
from dect.shapes import ShapeSpec, generate


def filled_triangle():
    return GeometricComplex([(0, 0), (1, 0), (0, 1)], [(0, 1), (1, 2), (0, 2)], [(0, 1, 2)])


def test_complex_basic_properties():
    complex = filled_triangle()
    assert complex.num_vertices == 3
    assert complex.num_edges == 3
    assert complex.num_triangles == 1
    assert complex.num_simplices == 7
    assert complex.ambient_dim == 2
    assert complex.dimension == SimplexDim.TRIANGLE
    assert not complex.is_point_cloud


def test_complex_arrays_are_readonly():
    complex = filled_triangle()
    with pytest.raises(ValueError):
        complex.vertices[0, 0] = 5.0


def test_complex_empty():
    complex = GeometricComplex([])
    assert complex.num_vertices == 0
    assert complex.dimension is None
    assert complex.is_point_cloud


def test_complex_ragged_vertices():
    with pytest.raises(DimensionMismatchError):
        GeometricComplex([(0, 0), (1, 0, 0)])


def test_complex_degenerate_simplex():
    with pytest.raises(DegenerateSimplexError):
        GeometricComplex([(0, 0), (1, 0)], [(1, 1)])
    with pytest.raises(DegenerateSimplexError):
        GeometricComplex([(0, 0), (1, 0), (0, 1)], [(0, 1), (1, 2), (0, 2)], [(0, 1, 0)])


def test_simplices_by_dimension():
    complex = filled_triangle()
    assert complex.simplices(SimplexDim.VERTEX).tolist() == [[0], [1], [2]]
    assert complex.simplices(1).shape == (3, 2)
    assert complex.simplices(2).tolist() == [[0, 1, 2]]


def test_validate_missing_face():
    complex = GeometricComplex([(0, 0), (1, 0), (0, 1)], [(0, 1), (1, 2)], [(0, 1, 2)])
    report = validate(complex)
    assert len(report) == 1
    assert report[0].kind == "missing-face"
    assert report[0].message == "missing face {0,2}"


def test_validate_empty_and_point_cloud():
    assert validate(GeometricComplex([])) == []
    assert validate(GeometricComplex(np.zeros((5, 2)))) == []


def test_validate_bad_index():
    report = validate(GeometricComplex([(0, 0), (1, 0)], [(0, 7)]))
    assert [v.kind for v in report] == ["bad-index"]


def test_validate_duplicate_unordered():
    report = validate(GeometricComplex([(0, 0), (1, 0)], [(0, 1), (1, 0)]))
    assert [v.kind for v in report] == ["duplicate"]


def test_validate_valid_mesh():
    assert validate(generate(ShapeSpec(kind="octahedron"))) == []


def test_normalize_examples():
    out = normalize(GeometricComplex([(2, 0), (4, 0)]))
    np.testing.assert_allclose(out.vertices, [(-1, 0), (1, 0)], atol=1e-12)

    out = normalize(GeometricComplex([(7, 3)]))
    np.testing.assert_allclose(out.vertices, [(0, 0)], atol=1e-12)


def test_normalize_idempotent(rng):
    complex = GeometricComplex(rng.normal(size=(20, 3)) * 5 + 2)
    once = normalize(complex)
    np.testing.assert_allclose(once.vertices.mean(axis=0), 0, atol=1e-12)
    assert np.linalg.norm(once.vertices, axis=1).max() <= 1.0
    np.testing.assert_allclose(normalize(once).vertices, once.vertices, atol=1e-12)


def test_normalize_empty():
    with pytest.raises(EmptyComplexError, match="empty vertex set"):
        normalize(GeometricComplex([]))


def test_normalize_keeps_simplices():
    complex = filled_triangle()
    out = normalize(complex)
    np.testing.assert_array_equal(out.edges, complex.edges)
    np.testing.assert_array_equal(out.triangles, complex.triangles)


@pytest.mark.parametrize(
    "kind, expected",
    [
        ("filled-triangle", 1),
        ("square-cycle", 0),
        ("octahedron", 2),
    ],
)
def test_euler_characteristic(kind, expected):
    assert euler_characteristic(generate(ShapeSpec(kind=kind))) == expected


def test_euler_characteristic_permutation_invariant(rng):
    complex = generate(ShapeSpec(kind="octahedron"))
    permuted = complex.permuted(
        rng.permutation(complex.num_vertices),
        rng.permutation(complex.num_edges),
        rng.permutation(complex.num_triangles),
    )
    assert validate(permuted) == []
    assert euler_characteristic(permuted) == euler_characteristic(complex)


def test_permuted_remaps_indices():
    complex = GeometricComplex([(0, 0), (1, 0), (2, 0)], [(0, 1)])
    permuted = complex.permuted([2, 0, 1])
    np.testing.assert_array_equal(permuted.vertices, [(2, 0), (0, 0), (1, 0)])
    # Old vertices 0 and 1 are now at positions 1 and 2.
    assert permuted.edges.tolist() == [[1, 2]]


def test_euler_characteristic_disjoint_union():
    a = generate(ShapeSpec(kind="filled-triangle"))
    b = generate(ShapeSpec(kind="square-cycle"))
    union = a.disjoint_union(b)
    assert union.num_vertices == 7
    assert validate(union) == []
    assert euler_characteristic(union) == euler_characteristic(a) + euler_characteristic(b)


def test_disjoint_union_dimension_mismatch():
    with pytest.raises(DimensionMismatchError):
        GeometricComplex([(0, 0)]).disjoint_union(GeometricComplex([(0, 0, 0)]))


def test_with_vertices_equality():
    complex = filled_triangle()
    assert complex.with_vertices(complex.vertices) == complex
    assert complex.with_vertices(complex.vertices + 1) != complex

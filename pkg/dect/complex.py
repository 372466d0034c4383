"""Embedded simplicial complexes of dimension at most 2.

A :class:`GeometricComplex` stores vertex coordinates in ``R^n`` together with
edge and triangle index lists. Bare point clouds (no simplices beyond
vertices) and geometric graphs (no triangles) are represented by the same
type.
"""

from enum import IntEnum
from typing import Iterator, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np
from numpy.typing import ArrayLike

from .exceptions import DegenerateSimplexError, DimensionMismatchError, EmptyComplexError, ShapeMismatchError
from .typing import FloatArray, IndexArray, Simplex, SimplexList


class SimplexDim(IntEnum):
    VERTEX = 0
    EDGE = 1
    TRIANGLE = 2


def _as_coordinates(vertices: ArrayLike) -> FloatArray:
    try:
        arr = np.array(vertices, dtype=np.float64)
    except ValueError as e:
        raise DimensionMismatchError("All vertices must share the same ambient dimension.") from e

    if arr.size == 0 and arr.ndim < 2:
        arr = arr.reshape(0, 0)
    if arr.ndim != 2:
        raise DimensionMismatchError(f"Vertices must be a 2D array of shape (num_vertices, n); got shape {arr.shape}.")
    return arr


def _as_simplices(simplices: SimplexList, size: int, name: str) -> IndexArray:
    arr = np.array(simplices, dtype=np.int64)
    if arr.size == 0:
        arr = arr.reshape(0, size)
    if arr.ndim != 2 or arr.shape[1] != size:
        raise ShapeMismatchError(f"Each {name} must have exactly {size} vertex indices; got array of shape {arr.shape}.")

    ordered = np.sort(arr, axis=1)
    repeated = np.any(ordered[:, 1:] == ordered[:, :-1], axis=1)
    if repeated.any():
        bad = tuple(int(x) for x in arr[np.argmax(repeated)])
        raise DegenerateSimplexError(f"Degenerate {name} {bad}: vertex indices must be pairwise distinct.")
    return arr


def _readonly(arr: np.ndarray) -> np.ndarray:
    arr.flags.writeable = False
    return arr


class GeometricComplex:
    """Immutable embedded simplicial complex.

    Parameters
    ----------
    vertices: ArrayLike
        ``(num_vertices, n)`` coordinates.
    edges: ArrayLike
        ``(num_edges, 2)`` vertex indices.
    triangles: ArrayLike
        ``(num_triangles, 3)`` vertex indices.

    Index bounds, duplicates and face closure are *not* enforced here;
    use :func:`validate` to obtain a report.
    """

    def __init__(self, vertices: ArrayLike, edges: SimplexList = (), triangles: SimplexList = ()):
        self._vertices = _readonly(_as_coordinates(vertices))
        self._edges = _readonly(_as_simplices(edges, 2, "edge"))
        self._triangles = _readonly(_as_simplices(triangles, 3, "triangle"))

    def __repr__(self):
        return (
            f"{type(self).__name__}(num_vertices={self.num_vertices}, num_edges={self.num_edges}, "
            f"num_triangles={self.num_triangles}, ambient_dim={self.ambient_dim})"
        )

    def __eq__(self, other):
        if not isinstance(other, GeometricComplex):
            return False
        return (
            self._vertices.shape == other._vertices.shape
            and np.array_equal(self._vertices, other._vertices)
            and np.array_equal(self._edges, other._edges)
            and np.array_equal(self._triangles, other._triangles)
        )

    __hash__ = None

    @property
    def vertices(self) -> FloatArray:
        return self._vertices

    @property
    def edges(self) -> IndexArray:
        return self._edges

    @property
    def triangles(self) -> IndexArray:
        return self._triangles

    @property
    def num_vertices(self) -> int:
        return self._vertices.shape[0]

    @property
    def num_edges(self) -> int:
        return self._edges.shape[0]

    @property
    def num_triangles(self) -> int:
        return self._triangles.shape[0]

    @property
    def num_simplices(self) -> int:
        return self.num_vertices + self.num_edges + self.num_triangles

    @property
    def ambient_dim(self) -> int:
        return self._vertices.shape[1]

    @property
    def dimension(self) -> Optional[SimplexDim]:
        """Highest simplex dimension present; ``None`` for the empty complex."""
        if self.num_triangles:
            return SimplexDim.TRIANGLE
        if self.num_edges:
            return SimplexDim.EDGE
        if self.num_vertices:
            return SimplexDim.VERTEX
        return None

    @property
    def is_point_cloud(self) -> bool:
        return self.num_edges == 0 and self.num_triangles == 0

    def simplices(self, dim: SimplexDim) -> IndexArray:
        """Index array of all simplices of dimension ``dim``.

        Vertices are returned as a ``(num_vertices, 1)`` column of indices.
        """
        dim = SimplexDim(dim)
        if dim == SimplexDim.VERTEX:
            return np.arange(self.num_vertices, dtype=np.int64)[:, None]
        elif dim == SimplexDim.EDGE:
            return self._edges
        return self._triangles

    def with_vertices(self, vertices: ArrayLike) -> "GeometricComplex":
        """Same simplices, new coordinates."""
        vertices = _as_coordinates(vertices)
        if vertices.shape[0] != self.num_vertices:
            raise ShapeMismatchError(f"Expected {self.num_vertices} vertices, got {vertices.shape[0]}.")
        return GeometricComplex(vertices, self._edges, self._triangles)

    def permuted(
        self,
        vertex_order: Optional[Sequence[int]] = None,
        edge_order: Optional[Sequence[int]] = None,
        triangle_order: Optional[Sequence[int]] = None,
    ) -> "GeometricComplex":
        """Reorder vertices and/or simplex lists, remapping indices accordingly.

        New vertex ``i`` is old vertex ``vertex_order[i]``.
        """
        vertices, edges, triangles = self._vertices, self._edges, self._triangles
        if vertex_order is not None:
            vertex_order = np.asarray(vertex_order, dtype=np.int64)
            inverse = np.empty_like(vertex_order)
            inverse[vertex_order] = np.arange(vertex_order.size)
            vertices = vertices[vertex_order]
            edges = inverse[edges]
            triangles = inverse[triangles]
        if edge_order is not None:
            edges = edges[np.asarray(edge_order, dtype=np.int64)]
        if triangle_order is not None:
            triangles = triangles[np.asarray(triangle_order, dtype=np.int64)]
        return GeometricComplex(vertices, edges, triangles)

    def disjoint_union(self, other: "GeometricComplex") -> "GeometricComplex":
        if self.num_vertices and other.num_vertices and self.ambient_dim != other.ambient_dim:
            raise DimensionMismatchError(f"Cannot join complexes in R^{self.ambient_dim} and R^{other.ambient_dim}.")
        if not self.num_vertices:
            return other
        if not other.num_vertices:
            return self
        offset = self.num_vertices
        return GeometricComplex(
            np.vstack([self._vertices, other._vertices]),
            np.vstack([self._edges, other._edges + offset]),
            np.vstack([self._triangles, other._triangles + offset]),
        )


class Violation(NamedTuple):
    kind: str  # One of {"bad-index", "missing-face", "duplicate"}
    simplex: Simplex
    message: str


ValidationReport = List[Violation]


def _fmt_face(face: Tuple[int, ...]) -> str:
    return "{" + ",".join(str(x) for x in sorted(face)) + "}"


def _iter_simplices(complex: GeometricComplex) -> Iterator[Tuple[str, Simplex]]:
    for edge in complex.edges:
        yield "edge", tuple(int(x) for x in edge)
    for triangle in complex.triangles:
        yield "triangle", tuple(int(x) for x in triangle)


def validate(complex: GeometricComplex) -> ValidationReport:
    """Report every violated simplicial-complex invariant.

    Returns
    -------
    ValidationReport
        Violations in simplex order; empty if and only if the complex is valid.
    """
    report = []
    num_vertices = complex.num_vertices
    seen = set()
    in_bounds = {}

    for name, simplex in _iter_simplices(complex):
        out_of_range = [i for i in simplex if not 0 <= i < num_vertices]
        if out_of_range:
            report.append(
                Violation(
                    "bad-index",
                    simplex,
                    f"{name} {simplex} references vertex {out_of_range[0]}, but there are {num_vertices} vertices",
                )
            )
        key = frozenset(simplex)
        if key in seen:
            report.append(Violation("duplicate", simplex, f"duplicate {name} {_fmt_face(simplex)}"))
        seen.add(key)
        in_bounds[simplex] = not out_of_range

    edge_set = {frozenset(int(x) for x in edge) for edge in complex.edges}
    for triangle in complex.triangles:
        triangle = tuple(int(x) for x in triangle)
        if not in_bounds[triangle]:
            continue
        i, j, k = triangle
        for face in ((i, j), (j, k), (i, k)):
            if frozenset(face) not in edge_set:
                report.append(Violation("missing-face", triangle, f"missing face {_fmt_face(face)}"))

    return report


def normalize(complex: GeometricComplex) -> GeometricComplex:
    """Center vertices at the origin and scale them into the closed unit ball.

    If all vertices coincide, only the centering is applied.

    Raises
    ------
    EmptyComplexError
        The complex has no vertices.
    """
    if complex.num_vertices == 0:
        raise EmptyComplexError("empty vertex set")

    centered = complex.vertices - complex.vertices.mean(axis=0)
    scale = np.linalg.norm(centered, axis=1).max()
    if scale > 0:
        centered = centered / scale
    return complex.with_vertices(centered)


def euler_characteristic(complex: GeometricComplex) -> int:
    """Alternating simplex count ``V - E + F``."""
    return complex.num_vertices - complex.num_edges + complex.num_triangles

"""Complex, grid and artifact file formats.

Complex formats
---------------
``off``
    Object File Format mesh. Faces with more than three vertices are fan
    triangulated; edges are synthesized from the faces (shared edges once).
    Two-vertex faces are read as bare edges.
``edgelist``
    Header ``n d``, then ``n`` lines of ``d`` coordinates, then one ``i j``
    edge per line.
``csv-points``
    One comma-separated point per line.

Blank lines and lines starting with ``#`` are ignored everywhere. Every
writer goes through :func:`~dect.utils.atomic_write`, and reals are written
with ``repr`` so reading them back is exact.
"""

from pathlib import Path
from typing import Iterable, Iterator, List, Optional, Sequence, Tuple

import numpy as np
from autoregistry import Registry

from .complex import GeometricComplex, normalize, validate
from .directions import DirectionSet
from .ect import EctConfig, EctGrid, EctMode, Normalization
from .exceptions import FileFormatError
from .typing import FloatArray, PathType
from .utils import atomic_write

# Loaders should have function signature
#    def load_<format>(lines: Iterator[Tuple[int, str]], path: Path) -> GeometricComplex
# and writers
#    def write_<format>(complex: GeometricComplex) -> Iterable[str]
# Format names use dashes where the function names use underscores.
loaders = Registry(prefix="load_")
writers = Registry(prefix="write_")

SUFFIX_FORMATS = {
    ".off": "off",
    ".edges": "edgelist",
    ".edgelist": "edgelist",
    ".txt": "edgelist",
    ".csv": "csv-points",
}


def _key(format: str) -> str:
    return format.replace("-", "_")


def infer_format(path: PathType) -> str:
    suffix = Path(path).suffix.lower()
    try:
        return SUFFIX_FORMATS[suffix]
    except KeyError:
        raise FileFormatError(f'Cannot infer the format of "{suffix}" files; pass it explicitly.', path) from None


def _content_lines(text: str) -> Iterator[Tuple[int, str]]:
    """``(1-based line number, stripped line)`` for every non-blank, non-comment line."""
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if line and not line.startswith("#"):
            yield lineno, line


def _floats(tokens: Sequence[str], path, lineno: int) -> List[float]:
    try:
        return [float(t) for t in tokens]
    except ValueError:
        raise FileFormatError(f"expected real numbers, got {' '.join(tokens)!r}", path, lineno) from None


def _ints(tokens: Sequence[str], path, lineno: int) -> List[int]:
    try:
        return [int(t) for t in tokens]
    except ValueError:
        raise FileFormatError(f"expected integers, got {' '.join(tokens)!r}", path, lineno) from None


def _check_indices(indices: Sequence[int], num_vertices: int, path, lineno: int):
    for i in indices:
        if not 0 <= i < num_vertices:
            raise FileFormatError(f"vertex index {i} out of range for {num_vertices} vertices", path, lineno)
    if len(set(indices)) != len(indices):
        raise FileFormatError(f"simplex {tuple(indices)} repeats a vertex", path, lineno)


def _next(lines: Iterator[Tuple[int, str]], path, what: str) -> Tuple[int, str]:
    try:
        return next(lines)
    except StopIteration:
        raise FileFormatError(f"unexpected end of file; expected {what}", path) from None


def _read_vertex_block(lines, path, count: int, dim: Optional[int], split=str.split) -> List[List[float]]:
    vertices = []
    for _ in range(count):
        lineno, line = _next(lines, path, f"{count} vertex lines")
        coords = _floats(split(line), path, lineno)
        if dim is None:
            dim = len(coords)
        if len(coords) != dim or dim == 0:
            raise FileFormatError(f"expected {dim} coordinates, got {len(coords)}", path, lineno)
        vertices.append(coords)
    return vertices


@loaders
def load_off(lines: Iterator[Tuple[int, str]], path: Path) -> GeometricComplex:
    lineno, line = _next(lines, path, "OFF header")
    tokens = line.split()
    if tokens[0].upper() != "OFF":
        raise FileFormatError(f'expected "OFF" header, got {tokens[0]!r}', path, lineno)
    if len(tokens) == 1:
        lineno, line = _next(lines, path, "vertex and face counts")
        tokens = line.split()
    else:
        tokens = tokens[1:]
    counts = _ints(tokens, path, lineno)
    if len(counts) < 2 or min(counts) < 0:
        raise FileFormatError("expected vertex, face and edge counts", path, lineno)
    num_vertices, num_faces = counts[:2]

    vertices = _read_vertex_block(lines, path, num_vertices, None)

    edges, triangles = {}, []
    for _ in range(num_faces):
        lineno, line = _next(lines, path, f"{num_faces} face lines")
        tokens = line.split()
        (k,) = _ints(tokens[:1], path, lineno)
        if k < 2 or len(tokens) < k + 1:
            raise FileFormatError(f"face needs at least 2 vertex indices, got {line!r}", path, lineno)
        face = _ints(tokens[1 : k + 1], path, lineno)  # trailing tokens are colors
        _check_indices(face, num_vertices, path, lineno)
        if k == 2:
            edges.setdefault(frozenset(face), tuple(face))
            continue
        for j in range(1, k - 1):
            triangle = (face[0], face[j], face[j + 1])
            triangles.append(triangle)
            for a, b in ((0, 1), (1, 2), (0, 2)):
                edge = (triangle[a], triangle[b])
                edges.setdefault(frozenset(edge), edge)

    return GeometricComplex(vertices, list(edges.values()), triangles)


@loaders
def load_edgelist(lines: Iterator[Tuple[int, str]], path: Path) -> GeometricComplex:
    lineno, line = _next(lines, path, 'header "n d"')
    header = _ints(line.split(), path, lineno)
    if len(header) != 2 or header[0] < 0 or header[1] < 1:
        raise FileFormatError('header must be "n d" with n >= 0 and d >= 1', path, lineno)
    num_vertices, dim = header

    vertices = _read_vertex_block(lines, path, num_vertices, dim)
    edges = []
    for lineno, line in lines:
        edge = _ints(line.split(), path, lineno)
        if len(edge) != 2:
            raise FileFormatError(f"expected an edge \"i j\", got {line!r}", path, lineno)
        _check_indices(edge, num_vertices, path, lineno)
        edges.append(tuple(edge))
    return GeometricComplex(np.reshape(vertices, (num_vertices, dim)), edges)


def _split_csv(line: str) -> List[str]:
    return [t.strip() for t in line.split(",")]


@loaders
def load_csv_points(lines: Iterator[Tuple[int, str]], path: Path) -> GeometricComplex:
    vertices, dim = [], None
    for lineno, line in lines:
        coords = _floats(_split_csv(line), path, lineno)
        if dim is None:
            dim = len(coords)
        if len(coords) != dim:
            raise FileFormatError(f"expected {dim} coordinates, got {len(coords)}", path, lineno)
        vertices.append(coords)
    return GeometricComplex(vertices)


def load_complex(
    path: PathType,
    format: Optional[str] = None,
    normalize_vertices: bool = True,
    check: bool = True,
) -> GeometricComplex:
    """Read a complex, check it, and optionally normalize it into the unit ball.

    Parameters
    ----------
    format: Optional[str]
        One of ``off``, ``edgelist``, ``csv-points``. Inferred from the suffix if omitted.
    check: bool
        Reject complexes that :func:`~dect.complex.validate` reports problems for.

    Raises
    ------
    FileFormatError
        Unreadable file, malformed line (with its line number) or an invalid complex.
    """
    path = Path(path)
    format = infer_format(path) if format is None else format
    try:
        loader = loaders[_key(format)]
    except KeyError:
        raise FileFormatError(f'Unknown complex format "{format}".', path) from None
    try:
        text = path.read_text()
    except OSError as e:
        raise FileFormatError(f"cannot read file: {e}", path) from e

    complex = loader(_content_lines(text), path)
    report = validate(complex) if check else []
    if report:
        raise FileFormatError(f"invalid complex: {report[0].message}", path)
    if normalize_vertices:
        complex = normalize(complex)
    return complex


def _real(x: float) -> str:
    return repr(float(x))


def _join(values: Iterable[float], sep: str) -> str:
    return sep.join(_real(x) for x in values)


@writers
def write_off(complex: GeometricComplex) -> Iterable[str]:
    covered = {frozenset(e) for t in complex.triangles for e in ((t[0], t[1]), (t[1], t[2]), (t[0], t[2]))}
    loose_edges = [e for e in complex.edges if frozenset(e) not in covered]
    yield "OFF"
    yield f"{complex.num_vertices} {complex.num_triangles + len(loose_edges)} {complex.num_edges}"
    for vertex in complex.vertices:
        yield _join(vertex, " ")
    for triangle in complex.triangles:
        yield "3 " + " ".join(str(int(i)) for i in triangle)
    for edge in loose_edges:
        yield "2 " + " ".join(str(int(i)) for i in edge)


@writers
def write_edgelist(complex: GeometricComplex) -> Iterable[str]:
    if complex.num_triangles:
        raise FileFormatError("edgelist files cannot hold triangles; use OFF.")
    yield f"{complex.num_vertices} {complex.ambient_dim}"
    for vertex in complex.vertices:
        yield _join(vertex, " ")
    for i, j in complex.edges:
        yield f"{int(i)} {int(j)}"


@writers
def write_csv_points(complex: GeometricComplex) -> Iterable[str]:
    if not complex.is_point_cloud:
        raise FileFormatError("csv-points files hold bare point clouds only.")
    for vertex in complex.vertices:
        yield _join(vertex, ",")


def _write_lines(path: PathType, lines: Iterable[str]):
    lines = list(lines)  # fail before touching the file system
    with atomic_write(path) as f:
        for line in lines:
            f.write(line + "\n")


def write_complex(complex: GeometricComplex, path: PathType, format: Optional[str] = None):
    format = infer_format(path) if format is None else format
    try:
        writer = writers[_key(format)]
    except KeyError:
        raise FileFormatError(f'Unknown complex format "{format}".', path) from None
    _write_lines(path, writer(complex))


def write_points(points: FloatArray, path: PathType):
    """Coordinates as ``csv-points``."""
    _write_lines(path, (_join(p, ",") for p in np.atleast_2d(points)))


def write_directions(dirs: DirectionSet, path: PathType):
    """One direction per line, comma separated."""
    write_points(dirs.directions, path)


def read_directions(path: PathType, constrained: bool = True) -> DirectionSet:
    complex = load_complex(path, "csv-points", normalize_vertices=False)
    return DirectionSet(complex.vertices, constrained=constrained)


def write_table(path: PathType, header: Sequence[str], rows: Iterable[Sequence]):
    """Generic csv with a header row; reals at full precision."""

    def fmt(x):
        return _real(x) if isinstance(x, (float, np.floating)) else str(x)

    _write_lines(path, [",".join(header), *(",".join(fmt(x) for x in row) for row in rows)])


def write_trace(trace: Sequence[float], path: PathType):
    """Loss trace as ``step,loss`` rows."""
    write_table(path, ("step", "loss"), ((i, float(loss)) for i, loss in enumerate(trace)))


def pgm_scale_path(path: PathType) -> Path:
    path = Path(path)
    return path.with_name(path.name + ".scale")


def write_ect(grid: EctGrid, path: PathType, format: Optional[str] = None):
    """Write a grid as ``csv`` (exact) or ``pgm`` (8-bit view).

    The csv holds a header row of heights followed by one row per direction.
    The pgm has one pixel row per direction; its scaling constants go to a
    ``<path>.scale`` sidecar holding ``min`` and ``max`` (equal for constant
    grids).
    """
    if grid.values.size == 0:
        raise FileFormatError("Cannot write an empty ECT grid.", path)
    if format is None:
        format = "pgm" if Path(path).suffix.lower() == ".pgm" else "csv"

    if format == "csv":
        _write_lines(path, [_join(grid.heights, ","), *(_join(row, ",") for row in grid.values)])
    elif format == "pgm":
        pixels, vmin, vmax = grid.as_image()
        rows, cols = pixels.shape
        with atomic_write(path, "wb") as f:
            f.write(f"P5\n{cols} {rows}\n255\n".encode("ascii"))
            f.write(pixels.tobytes())
        _write_lines(pgm_scale_path(path), [f"min={_real(vmin)}", f"max={_real(vmax)}"])
    else:
        raise FileFormatError(f'Unknown ECT format "{format}"; expected "csv" or "pgm".', path)


def read_ect(path: PathType, config: Optional[EctConfig] = None, num_vertices: int = 0) -> EctGrid:
    """Read a csv grid written by :func:`write_ect`.

    Without ``config`` the grid is labelled as an un-normalized hard ECT on
    the height interval found in the header.
    """
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as e:
        raise FileFormatError(f"cannot read file: {e}", path) from e

    lines = _content_lines(text)
    lineno, header = _next(lines, path, "header row of heights")
    heights = _floats(_split_csv(header), path, lineno)
    rows = []
    for lineno, line in lines:
        row = _floats(_split_csv(line), path, lineno)
        if len(row) != len(heights):
            raise FileFormatError(f"expected {len(heights)} values, got {len(row)}", path, lineno)
        rows.append(row)
    if not rows or len(heights) < 2:
        raise FileFormatError("grid needs at least one row and two heights", path)

    if config is None:
        config = EctConfig(
            num_heights=len(heights),
            height_interval=(heights[0], heights[-1]),
            normalization=Normalization.NONE,
            mode=EctMode.HARD,
        )
    elif config.num_heights != len(heights):
        raise FileFormatError(f"grid has {len(heights)} heights but config expects {config.num_heights}", path)
    return EctGrid(rows, config, heights, num_vertices)

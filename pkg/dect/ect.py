"""Forward Euler Characteristic Transform.

The ECT of a complex ``K`` along direction ``xi`` at height ``h`` is the Euler
characteristic of the sublevel complex ``{sigma : h_xi(sigma) <= h}``, where a
simplex's height is the maximum of ``<x_v, xi>`` over its vertices. Writing it
as an alternating sum of indicator functions over all simplices makes both the
exact ("hard") and the sigmoid-relaxed ("smooth") transform a few vectorized
array operations:

1. inner products of all vertex coordinates with all directions,
2. per-simplex maxima (the sublevel filtration),
3. indicator (or sigmoid) evaluated on a regular height grid,
4. signed sum over simplex dimensions.
"""

from dataclasses import dataclass
from enum import Enum
from typing import Dict, Tuple

import numpy as np
from scipy.special import expit

from .complex import GeometricComplex, SimplexDim
from .directions import DirectionSet
from .exceptions import ConfigError, NormalizationError
from .models import BaseModel, prevalidator_reuse, validator
from .typing import FloatArray, IndexArray

try:
    from pydantic.v1 import Field, confloat, conint
except ImportError:
    from pydantic import Field, confloat, conint

# Upper bound on the number of float64 sigmoid evaluations held in memory at once.
CHUNK_ELEMENTS = 1 << 22


class Normalization(str, Enum):
    NONE = "none"
    PER_VERTEX_COUNT = "per-vertex-count"
    UNIT_L2 = "unit-l2"


class EctMode(str, Enum):
    HARD = "hard"
    SMOOTH = "smooth"


_NORMALIZATION_ALIASES = {
    "vertex": Normalization.PER_VERTEX_COUNT,
    "l2": Normalization.UNIT_L2,
}


def _normalization_alias(value):
    if isinstance(value, str):
        return _NORMALIZATION_ALIASES.get(value.lower(), value.lower())
    return value


class EctConfig(BaseModel):
    """Discretization and relaxation settings of an ECT grid."""

    lambda_: confloat(gt=0) = Field(10.0, alias="lambda")  # sigmoid tightness
    num_heights: conint(ge=2) = 16
    height_interval: Tuple[float, float] = (-1.0, 1.0)
    normalization: Normalization = Normalization.NONE
    mode: EctMode = EctMode.SMOOTH

    ##############
    # VALIDATORS #
    ##############
    _v_normalization_alias = prevalidator_reuse("normalization")(_normalization_alias)

    @validator("height_interval")
    def interval_ordered(cls, v):
        a, b = v
        if not a < b:
            raise ValueError(f"Height interval must satisfy a < b; got [{a}, {b}].")
        return v

    def heights(self) -> FloatArray:
        """``num_heights`` equally spaced samples including both interval endpoints."""
        a, b = self.height_interval
        return np.linspace(a, b, self.num_heights)

    def with_mode(self, mode) -> "EctConfig":
        return self.copy(update={"mode": EctMode(mode)})

    def with_normalization(self, normalization) -> "EctConfig":
        return self.copy(update={"normalization": Normalization(_normalization_alias(normalization))})

    def grid_compatible(self, other: "EctConfig") -> bool:
        """Two configs produce directly comparable grids.

        Sigmoid tightness and hard/smooth mode may differ.
        """
        return (
            self.num_heights == other.num_heights
            and tuple(self.height_interval) == tuple(other.height_interval)
            and self.normalization == other.normalization
        )


@dataclass(frozen=True)
class FiltrationValues:
    """Sublevel filtration of a complex for every direction of a set.

    Attributes
    ----------
    vertex_heights: FloatArray
        ``(num_directions, num_vertices)`` inner products ``<x_v, xi_d>``.
    edge_heights, triangle_heights: FloatArray
        ``(num_directions, num_simplices)`` per-simplex maxima.
    edge_argmax, triangle_argmax: IndexArray
        Vertex attaining each maximum; ties go to the lowest vertex index.
    """

    vertex_heights: FloatArray
    edge_heights: FloatArray
    triangle_heights: FloatArray
    edge_argmax: IndexArray
    triangle_argmax: IndexArray

    def simplex_heights(self, dim: SimplexDim) -> FloatArray:
        return {
            SimplexDim.VERTEX: self.vertex_heights,
            SimplexDim.EDGE: self.edge_heights,
            SimplexDim.TRIANGLE: self.triangle_heights,
        }[SimplexDim(dim)]

    def argmax_vertex(self, dim: SimplexDim) -> IndexArray:
        dim = SimplexDim(dim)
        if dim == SimplexDim.VERTEX:
            return np.broadcast_to(np.arange(self.vertex_heights.shape[1]), self.vertex_heights.shape)
        elif dim == SimplexDim.EDGE:
            return self.edge_argmax
        return self.triangle_argmax

    def by_dimension(self) -> Dict[SimplexDim, FloatArray]:
        return {dim: self.simplex_heights(dim) for dim in SimplexDim}


class EctGrid:
    """Discretized ECT: one row (an Euler Characteristic Curve) per direction.

    Attributes
    ----------
    values: FloatArray
        ``(num_directions, num_heights)``.
    config: EctConfig
        Config the grid was computed with; ``config.normalization`` records
        the normalization already applied to ``values``.
    heights: FloatArray
        Sampled heights ``h_1 ... h_m``.
    num_vertices: int
        Vertex count of the source complex.
    """

    def __init__(self, values, config: EctConfig, heights=None, num_vertices: int = 0):
        values = np.array(values, dtype=np.float64)
        if values.ndim != 2:
            raise ValueError(f"ECT values must be 2D; got shape {values.shape}.")
        heights = config.heights() if heights is None else np.array(heights, dtype=np.float64)
        if values.shape[1] != heights.shape[0]:
            raise ValueError(f"Grid has {values.shape[1]} columns but {heights.shape[0]} heights.")
        values.flags.writeable = False
        heights.flags.writeable = False
        self.values = values
        self.config = config
        self.heights = heights
        self.num_vertices = num_vertices

    def __repr__(self):
        return f"{type(self).__name__}(shape={self.shape}, mode={self.config.mode.value}, normalization={self.config.normalization.value})"

    @property
    def shape(self) -> Tuple[int, int]:
        return self.values.shape

    def curve(self, direction_index: int) -> FloatArray:
        """The Euler Characteristic Curve of one direction."""
        return self.values[direction_index]

    def with_values(self, values, **config_updates) -> "EctGrid":
        config = self.config.copy(update=config_updates) if config_updates else self.config
        return EctGrid(values, config, self.heights, self.num_vertices)

    def as_image(self) -> Tuple[np.ndarray, float, float]:
        """8-bit grayscale view of the grid, one pixel row per direction.

        Returns
        -------
        tuple
            ``(pixels, vmin, vmax)``; ``pixels = round(255 * (values - vmin) / (vmax - vmin))``.
            A constant grid maps to all-zero pixels with ``vmin == vmax``.
        """
        vmin, vmax = float(self.values.min()), float(self.values.max())
        if vmax == vmin:
            return np.zeros(self.shape, dtype=np.uint8), vmin, vmax
        pixels = np.rint(255.0 * (self.values - vmin) / (vmax - vmin))
        return pixels.astype(np.uint8), vmin, vmax


def _simplex_maxima(vertex_heights: FloatArray, simplices: IndexArray) -> Tuple[FloatArray, IndexArray]:
    num_directions = vertex_heights.shape[0]
    if simplices.shape[0] == 0:
        return np.zeros((num_directions, 0)), np.zeros((num_directions, 0), dtype=np.int64)

    # Sorting vertex indices makes argmax's first-occurrence rule pick the lowest index on ties.
    canonical = np.sort(simplices, axis=1)
    per_vertex = vertex_heights[:, canonical]  # (D, N, k + 1)
    position = np.argmax(per_vertex, axis=2)
    maxima = np.take_along_axis(per_vertex, position[..., None], axis=2)[..., 0]
    argmax = canonical[np.arange(canonical.shape[0])[None, :], position]
    return maxima, argmax


def heights(complex: GeometricComplex, dirs: DirectionSet) -> FiltrationValues:
    """Filtration values of every simplex for every direction.

    Raises
    ------
    DimensionMismatchError
        Coordinates and directions live in different ambient dimensions.
    """
    if complex.num_vertices:
        dirs.check_ambient_dim(complex.ambient_dim)
        vertex_heights = dirs.directions @ complex.vertices.T
    else:
        vertex_heights = np.zeros((len(dirs), 0))

    edge_heights, edge_argmax = _simplex_maxima(vertex_heights, complex.edges)
    triangle_heights, triangle_argmax = _simplex_maxima(vertex_heights, complex.triangles)
    return FiltrationValues(vertex_heights, edge_heights, triangle_heights, edge_argmax, triangle_argmax)


def _sign(dim: SimplexDim) -> float:
    return -1.0 if dim % 2 else 1.0


def chunk_size(num_directions: int, num_heights: int) -> int:
    """Simplices per block so one block holds at most ``CHUNK_ELEMENTS`` sigmoid values."""
    return max(1, CHUNK_ELEMENTS // max(1, num_directions * num_heights))


def _count_below(simplex_heights: FloatArray, grid: FloatArray) -> np.ndarray:
    """Number of simplices with height ``<= h`` for every direction and grid height."""
    counts = np.zeros((simplex_heights.shape[0], grid.size), dtype=np.int64)
    if simplex_heights.shape[1] == 0:
        return counts
    ordered = np.sort(simplex_heights, axis=1)
    for d, row in enumerate(ordered):
        counts[d] = np.searchsorted(row, grid, side="right")
    return counts


def _smooth_count_below(simplex_heights: FloatArray, grid: FloatArray, lam: float) -> FloatArray:
    """Sigmoid-relaxed ``_count_below``; blocks are summed in a fixed order."""
    num_directions, num_simplices = simplex_heights.shape
    out = np.zeros((num_directions, grid.size))
    step = chunk_size(num_directions, grid.size)
    for start in range(0, num_simplices, step):
        block = simplex_heights[:, start : start + step]
        out += expit(lam * (grid[None, None, :] - block[:, :, None])).sum(axis=1)
    return out


def raw_hard_values(filtration: FiltrationValues, grid: FloatArray) -> FloatArray:
    values = np.zeros((filtration.vertex_heights.shape[0], grid.size))
    for dim, simplex_heights in filtration.by_dimension().items():
        values += _sign(dim) * _count_below(simplex_heights, grid)
    return values


def raw_smooth_values(filtration: FiltrationValues, grid: FloatArray, lam: float) -> FloatArray:
    values = np.zeros((filtration.vertex_heights.shape[0], grid.size))
    for dim, simplex_heights in filtration.by_dimension().items():
        values += _sign(dim) * _smooth_count_below(simplex_heights, grid, lam)
    return values


def _check_mode(config: EctConfig, mode: EctMode):
    if config.mode != mode:
        raise ConfigError(f'Expected an EctConfig with mode="{mode.value}", got "{config.mode.value}".')


def ect_hard(complex: GeometricComplex, dirs: DirectionSet, config: EctConfig) -> EctGrid:
    """Exact ECT on the config's height grid (closed sublevel sets).

    With ``normalization="none"`` every value is an integer, and at heights
    above every simplex the value equals the Euler characteristic.
    """
    _check_mode(config, EctMode.HARD)
    grid = config.heights()
    values = raw_hard_values(heights(complex, dirs), grid)
    raw = EctGrid(values, config.with_normalization(Normalization.NONE), grid, complex.num_vertices)
    return normalize_ect(raw, config.normalization)


def ect_smooth(complex: GeometricComplex, dirs: DirectionSet, config: EctConfig) -> EctGrid:
    """Differentiable ECT; every indicator is replaced by ``S(lambda * (h - h_xi(sigma)))``."""
    _check_mode(config, EctMode.SMOOTH)
    grid = config.heights()
    values = raw_smooth_values(heights(complex, dirs), grid, config.lambda_)
    raw = EctGrid(values, config.with_normalization(Normalization.NONE), grid, complex.num_vertices)
    return normalize_ect(raw, config.normalization)


def compute_ect(complex: GeometricComplex, dirs: DirectionSet, config: EctConfig) -> EctGrid:
    """Dispatch on ``config.mode``."""
    if config.mode == EctMode.HARD:
        return ect_hard(complex, dirs, config)
    return ect_smooth(complex, dirs, config)


def normalization_scale(grid: EctGrid, mode: Normalization) -> float:
    """Divisor applied to an un-normalized grid by ``mode``."""
    mode = Normalization(_normalization_alias(mode))
    if mode == Normalization.NONE:
        return 1.0
    elif mode == Normalization.PER_VERTEX_COUNT:
        if grid.num_vertices <= 0:
            raise NormalizationError("Cannot normalize by vertex count of a complex without vertices.")
        return float(grid.num_vertices)

    norm = float(np.linalg.norm(grid.values))
    if norm == 0:
        raise NormalizationError("Cannot apply unit-l2 normalization to a zero-norm grid.")
    return norm


def normalize_ect(grid: EctGrid, mode: Normalization) -> EctGrid:
    """Rescale a raw grid.

    ``per-vertex-count`` divides by the complex's vertex count, ``unit-l2``
    by the grid's Frobenius norm; ``none`` returns ``grid`` itself.

    Raises
    ------
    NormalizationError
        ``grid`` is already normalized, or it has zero norm under ``unit-l2``.
    """
    mode = Normalization(_normalization_alias(mode))
    if mode == Normalization.NONE:
        return grid
    if grid.values.size == 0:
        raise NormalizationError("Cannot normalize an empty grid.")
    if grid.config.normalization != Normalization.NONE:
        raise NormalizationError(f'Grid is already normalized ("{grid.config.normalization.value}").')

    scale = normalization_scale(grid, mode)
    return grid.with_values(grid.values / scale, normalization=mode)

"""Reverse-mode gradients of the smooth ECT.

For a cell ``(d, i)`` and a ``k``-simplex ``sigma`` with ``s = S(lambda * (h_i - h_d(sigma)))``::

    d value[d, i] / d h_d(sigma) = -(-1)^k * lambda * s * (1 - s)

The simplex height is a maximum, so its gradient flows only into the argmax
vertex ``v``: ``d h / d x_v = xi_d`` and ``d h / d xi_d = x_v``.
"""

from dataclasses import dataclass

import numpy as np
from numpy.typing import ArrayLike
from scipy.special import expit

from .complex import GeometricComplex, SimplexDim
from .directions import DirectionSet
from .ect import (
    EctConfig,
    EctMode,
    FiltrationValues,
    Normalization,
    _check_mode,
    _sign,
    chunk_size,
    ect_smooth,
    heights,
    raw_smooth_values,
)
from .exceptions import ShapeMismatchError
from .typing import FloatArray


@dataclass(frozen=True)
class EctGradients:
    """Gradients of a scalar loss ``L`` with respect to the smooth ECT's inputs.

    Attributes
    ----------
    d_vertices: FloatArray
        ``(num_vertices, n)``, ``dL/dx_v``.
    d_directions: FloatArray
        ``(num_directions, n)``, ``dL/dxi_d``. Tangent to the sphere if the
        direction set is constrained.
    upstream: FloatArray
        ``(num_directions, num_heights)`` seed ``dL/dECT``.
    """

    d_vertices: FloatArray
    d_directions: FloatArray
    upstream: FloatArray


def _check_upstream(dirs: DirectionSet, config: EctConfig, upstream: ArrayLike) -> FloatArray:
    upstream = np.asarray(upstream, dtype=np.float64)
    expected = (len(dirs), config.num_heights)
    if upstream.shape != expected:
        raise ShapeMismatchError(f"Upstream gradient must have shape {expected}; got {upstream.shape}.")
    return upstream


def _raw_upstream(
    complex: GeometricComplex,
    config: EctConfig,
    filtration: FiltrationValues,
    grid: FloatArray,
    upstream: FloatArray,
) -> FloatArray:
    """Pull the upstream gradient back through the grid normalization."""
    if config.normalization == Normalization.NONE:
        return upstream
    elif config.normalization == Normalization.PER_VERTEX_COUNT:
        return upstream / complex.num_vertices

    raw = raw_smooth_values(filtration, grid, config.lambda_)
    norm = np.linalg.norm(raw)
    unit = raw / norm
    return (upstream - unit * np.sum(upstream * unit)) / norm


def _height_gradient(simplex_heights: FloatArray, grid: FloatArray, lam: float, upstream: FloatArray) -> FloatArray:
    """``sum_i upstream[d, i] * lambda * S'(lambda * (h_i - h))`` for every simplex height ``h``."""
    num_directions, num_simplices = simplex_heights.shape
    out = np.zeros((num_directions, num_simplices))
    step = chunk_size(num_directions, grid.size)
    for start in range(0, num_simplices, step):
        block = simplex_heights[:, start : start + step]
        s = expit(lam * (grid[None, None, :] - block[:, :, None]))
        out[:, start : start + step] = lam * np.einsum("dnh,dh->dn", s * (1.0 - s), upstream)
    return out


def ect_smooth_backward(
    complex: GeometricComplex,
    dirs: DirectionSet,
    config: EctConfig,
    upstream: ArrayLike,
) -> EctGradients:
    """Gradients of ``sum(upstream * ect_smooth(complex, dirs, config).values)``.

    Ties in a simplex maximum send the whole gradient to the lowest vertex index.

    Raises
    ------
    ShapeMismatchError
        ``upstream`` does not have the grid's shape.
    """
    _check_mode(config, EctMode.SMOOTH)
    upstream = _check_upstream(dirs, config, upstream)

    grid = config.heights()
    filtration = heights(complex, dirs)
    seed = _raw_upstream(complex, config, filtration, grid, upstream)

    xi = dirs.directions
    vertices = complex.vertices if complex.num_vertices else np.zeros((0, dirs.ambient_dim))
    num_vertices, n = vertices.shape
    d_vertices = np.zeros((num_vertices, n))
    d_directions = np.zeros((len(dirs), n))

    for dim in SimplexDim:
        simplex_heights = filtration.simplex_heights(dim)
        if simplex_heights.shape[1] == 0:
            continue
        argmax = np.ascontiguousarray(filtration.argmax_vertex(dim))
        g_h = -_sign(dim) * _height_gradient(simplex_heights, grid, config.lambda_, seed)

        flat_argmax = argmax.ravel()
        for c in range(n):
            d_vertices[:, c] += np.bincount(flat_argmax, weights=(g_h * xi[:, c : c + 1]).ravel(), minlength=num_vertices)
            d_directions[:, c] += np.sum(g_h * vertices[argmax, c], axis=1)

    if dirs.constrained:
        d_directions = dirs.tangent_projection(d_directions)

    return EctGradients(d_vertices, d_directions, upstream)


def finite_difference_oracle(
    complex: GeometricComplex,
    dirs: DirectionSet,
    config: EctConfig,
    upstream: ArrayLike,
    epsilon: float = 1e-5,
) -> EctGradients:
    """Central-difference gradients of ``sum(upstream * ect_smooth(...).values)``.

    Costs two forward passes per vertex coordinate and per direction coordinate.
    Direction gradients are projected onto the sphere's tangent space when
    ``dirs.constrained``, matching :func:`ect_smooth_backward`.
    """
    if not 1e-8 <= epsilon <= 1e-2:
        raise ValueError(f"epsilon must lie in [1e-8, 1e-2]; got {epsilon}.")
    _check_mode(config, EctMode.SMOOTH)
    upstream = _check_upstream(dirs, config, upstream)

    vertices = np.array(complex.vertices, dtype=np.float64)
    directions = np.array(dirs.directions, dtype=np.float64)

    def objective() -> float:
        grid = ect_smooth(complex.with_vertices(vertices), DirectionSet(directions, constrained=False), config)
        return float(np.sum(upstream * grid.values))

    def central_difference(x: np.ndarray) -> np.ndarray:
        out = np.zeros_like(x)
        for index in np.ndindex(x.shape):
            orig = x[index]
            x[index] = orig + epsilon
            f_plus = objective()
            x[index] = orig - epsilon
            f_minus = objective()
            x[index] = orig
            out[index] = (f_plus - f_minus) / (2 * epsilon)
        return out

    d_vertices = central_difference(vertices)
    d_directions = central_difference(directions)
    if dirs.constrained:
        d_directions = dirs.tangent_projection(d_directions)

    return EctGradients(d_vertices, d_directions, upstream)


def gradient_relative_error(actual: ArrayLike, expected: ArrayLike, floor: float = 1e-12) -> float:
    """``max|actual - expected|`` relative to the larger of the two arrays' max magnitudes."""
    actual, expected = np.asarray(actual), np.asarray(expected)
    if actual.shape != expected.shape:
        raise ShapeMismatchError(f"Cannot compare gradients of shapes {actual.shape} and {expected.shape}.")
    if actual.size == 0:
        return 0.0
    scale = max(np.max(np.abs(actual)), np.max(np.abs(expected)), floor)
    return float(np.max(np.abs(actual - expected)) / scale)


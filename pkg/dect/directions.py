from typing import Optional, Sequence

import numpy as np
from numpy.typing import ArrayLike

from .exceptions import DimensionMismatchError, DirectionConstraintError, ShapeMismatchError
from .typing import FloatArray

UNIT_NORM_TOLERANCE = 1e-9


class DirectionSet:
    """Ordered set of direction vectors ``xi`` in ``R^n``.

    Parameters
    ----------
    directions: ArrayLike
        ``(num_directions, n)`` array.
    constrained: bool
        Directions are restricted to the unit sphere.
        Every direction must then have unit norm within ``1e-9``.
    """

    def __init__(self, directions: ArrayLike, constrained: bool = True):
        directions = np.array(directions, dtype=np.float64)
        if directions.ndim != 2 or directions.shape[0] == 0:
            raise ShapeMismatchError(
                f"Directions must be a nonempty (num_directions, n) array; got shape {directions.shape}."
            )
        if constrained:
            norms = np.linalg.norm(directions, axis=1)
            if np.any(np.abs(norms - 1.0) > UNIT_NORM_TOLERANCE):
                raise DirectionConstraintError("Constrained directions must have unit norm; call DirectionSet.renormalized first.")
        directions.flags.writeable = False
        self._directions = directions
        self.constrained = constrained

    def __repr__(self):
        return f"{type(self).__name__}(num_directions={len(self)}, ambient_dim={self.ambient_dim}, constrained={self.constrained})"

    def __len__(self):
        return self._directions.shape[0]

    def __eq__(self, other):
        if not isinstance(other, DirectionSet):
            return False
        return self.constrained == other.constrained and np.array_equal(self._directions, other._directions)

    __hash__ = None

    @property
    def directions(self) -> FloatArray:
        return self._directions

    @property
    def ambient_dim(self) -> int:
        return self._directions.shape[1]

    def check_ambient_dim(self, n: int) -> None:
        if n != self.ambient_dim:
            raise DimensionMismatchError(f"Directions live in R^{self.ambient_dim}, but coordinates live in R^{n}.")

    def with_directions(self, directions: ArrayLike) -> "DirectionSet":
        """Replace the vectors, keeping the constraint flag.

        Constrained sets are re-projected onto the unit sphere.
        """
        directions = np.asarray(directions, dtype=np.float64)
        if self.constrained:
            directions = _unit_rows(directions)
        return DirectionSet(directions, constrained=self.constrained)

    def renormalized(self) -> "DirectionSet":
        return DirectionSet(_unit_rows(self._directions), constrained=True)

    def permuted(self, order: Sequence[int]) -> "DirectionSet":
        return DirectionSet(self._directions[np.asarray(order)], constrained=self.constrained)

    def tangent_projection(self, grads: FloatArray) -> FloatArray:
        """Remove the radial component of per-direction gradients, ``g - <g, xi> xi``."""
        radial = np.einsum("dn,dn->d", grads, self._directions)
        return grads - radial[:, None] * self._directions


def _unit_rows(vectors: np.ndarray) -> np.ndarray:
    norms = np.linalg.norm(vectors, axis=1, keepdims=True)
    if np.any(norms == 0):
        raise DirectionConstraintError("Cannot normalize a zero direction vector.")
    return vectors / norms


def uniform_directions(n: int, count: int = 16, seed: int = 0, constrained: bool = True) -> DirectionSet:
    """Directions spread over the unit sphere ``S^(n-1)``.

    For ``n == 2`` the angles are ``2 pi k / count`` starting at 0.
    For ``n == 1`` the two points of ``S^0`` alternate, starting at ``+1``.
    For ``n >= 3`` directions are normalized Gaussian samples drawn from ``seed``.
    """
    if n < 1:
        raise ValueError("Ambient dimension must be at least 1.")
    if count < 1:
        raise ValueError("At least one direction is required.")

    if n == 1:
        directions = np.where(np.arange(count) % 2 == 0, 1.0, -1.0)[:, None]
    elif n == 2:
        angles = 2 * np.pi * np.arange(count) / count
        directions = np.column_stack([np.cos(angles), np.sin(angles)])
    else:
        directions = _unit_rows(np.random.default_rng(seed).standard_normal((count, n)))
    return DirectionSet(directions, constrained=constrained)


def random_directions(n: int, count: int, seed: int = 0, constrained: bool = True) -> DirectionSet:
    """Independent uniformly random unit directions (any ``n``)."""
    rng = np.random.default_rng(seed)
    return DirectionSet(_unit_rows(rng.standard_normal((count, n))), constrained=constrained)


def clustered_directions(
    n: int,
    count: int,
    seed: int = 0,
    spread: float = 1e-3,
    constrained: bool = True,
    rng: Optional[np.random.Generator] = None,
) -> DirectionSet:
    """``count`` copies of one random unit direction, each jittered by Gaussian noise of std ``spread``.

    Used as a deliberately poor initialization for direction learning.
    """
    rng = np.random.default_rng(seed) if rng is None else rng
    base = _unit_rows(rng.standard_normal((1, n)))
    directions = _unit_rows(base + spread * rng.standard_normal((count, n)))
    return DirectionSet(directions, constrained=constrained)

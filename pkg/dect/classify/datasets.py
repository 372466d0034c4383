"""Labelled synthetic datasets for the classifier."""

from typing import List, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from ..complex import GeometricComplex
from ..exceptions import DatasetError
from ..shapes import ShapeSpec, generate

# Half-width of the uniform rotation angle applied by ``make_dataset(rotate=True)``.
DEFAULT_MAX_ANGLE = np.pi


class Sample(NamedTuple):
    complex: GeometricComplex
    label: int


Dataset = List[Sample]


class DatasetSplit(NamedTuple):
    train: Dataset
    validation: Dataset
    test: Dataset


def _rotate_plane(complex: GeometricComplex, angle: float) -> GeometricComplex:
    c, s = np.cos(angle), np.sin(angle)
    rotation = np.eye(complex.ambient_dim)
    rotation[:2, :2] = [[c, -s], [s, c]]
    return complex.with_vertices(complex.vertices @ rotation.T)


def make_dataset(
    kinds: Sequence[str],
    samples_per_class: int,
    num_points: int = 64,
    noise_sigma: float = 0.05,
    seed: int = 0,
    rotate: bool = False,
    max_angle: float = DEFAULT_MAX_ANGLE,
) -> Dataset:
    """One class per shape kind; class ``i`` is ``kinds[i]``.

    Every sample gets its own shape seed drawn from ``seed``, so the dataset is
    reproducible. With ``rotate`` each sample is additionally rotated in its
    first coordinate plane by an angle drawn uniformly from
    ``[-max_angle, max_angle]``.
    """
    if len(kinds) < 2:
        raise DatasetError("A classification dataset needs at least two classes.")
    if samples_per_class < 1:
        raise DatasetError("samples_per_class must be positive.")

    rng = np.random.default_rng(seed)
    dataset = []
    for label, kind in enumerate(kinds):
        for _ in range(samples_per_class):
            spec = ShapeSpec(
                kind=kind,
                num_points=num_points,
                noise_sigma=noise_sigma,
                seed=int(rng.integers(2**31)),
            )
            complex = generate(spec)
            if rotate and complex.ambient_dim >= 2:
                complex = _rotate_plane(complex, rng.uniform(-max_angle, max_angle))
            dataset.append(Sample(complex, label))
    return dataset


def labels(dataset: Sequence[Sample]) -> np.ndarray:
    return np.array([sample.label for sample in dataset], dtype=np.int64)


def check_dataset(dataset: Sequence[Sample], num_classes: Optional[int] = None, min_classes: int = 1):
    """Raise :class:`DatasetError` on an empty dataset, too few classes or out-of-range labels."""
    if len(dataset) == 0:
        raise DatasetError("Dataset is empty.")
    y = labels(dataset)
    if np.any(y < 0) or (num_classes is not None and np.any(y >= num_classes)):
        raise DatasetError(f"Labels must lie in [0, {num_classes}); got range [{y.min()}, {y.max()}].")
    if np.unique(y).size < min_classes:
        raise DatasetError(f"Dataset needs at least {min_classes} distinct classes.")


def _split(indices: np.ndarray, fraction: float) -> Tuple[np.ndarray, np.ndarray]:
    cut = int(round(len(indices) * fraction))
    return indices[cut:], indices[:cut]


def split_dataset(
    dataset: Sequence[Sample],
    seed: int = 0,
    test_fraction: float = 0.2,
    validation_fraction: float = 0.2,
) -> DatasetSplit:
    """Shuffle, hold out ``test_fraction`` for testing, then ``validation_fraction`` of the rest for validation."""
    if not (0 <= test_fraction < 1 and 0 <= validation_fraction < 1):
        raise ValueError("Split fractions must lie in [0, 1).")
    check_dataset(dataset)
    order = np.random.default_rng(seed).permutation(len(dataset))
    rest, test = _split(order, test_fraction)
    train, validation = _split(rest, validation_fraction)
    return DatasetSplit(
        [dataset[i] for i in train],
        [dataset[i] for i in validation],
        [dataset[i] for i in test],
    )

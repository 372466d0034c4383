"""ECT layer followed by per-curve embedding, symmetric pooling and an MLP head.

Each Euler Characteristic Curve is embedded independently, so pooling over
curves makes the representation invariant to the order of the directions.
"""

from dataclasses import dataclass
from enum import Enum
from typing import Dict, Optional, Sequence, Tuple

import numpy as np
from scipy.special import log_softmax

from ..complex import GeometricComplex
from ..directions import DirectionSet, uniform_directions
from ..ect import EctConfig, EctMode, ect_smooth
from ..exceptions import ConfigError, ShapeMismatchError
from ..grad import ect_smooth_backward
from ..typing import FloatArray
from .mlp import MlpCache, MlpParams

EMBED_HIDDEN = (32, 32)
EMBED_DIM = 16
HEAD_HIDDEN = (25, 25, 25)

DIRECTIONS_KEY = "directions"


class Pool(str, Enum):
    SUM = "sum"
    MEAN = "mean"


class ClassifierModel:
    """Differentiable-ECT classifier.

    Parameters
    ----------
    directions: DirectionSet
        Directions of the ECT layer; trainable or frozen depending on the run.
    ect_config: EctConfig
        Must be in smooth mode, also at evaluation time.
    curve_embed: MlpParams
        Maps one ECC (``num_heights`` values) to an embedding vector.
    pool: Pool
        Symmetric aggregation over the embedded curves.
    head: MlpParams
        Maps the pooled embedding to class logits.
    """

    def __init__(
        self,
        directions: DirectionSet,
        ect_config: EctConfig,
        curve_embed: MlpParams,
        head: MlpParams,
        pool: Pool = Pool.MEAN,
    ):
        if ect_config.mode != EctMode.SMOOTH:
            raise ConfigError("The classifier's ECT layer must use smooth mode.")
        if curve_embed.in_dim != ect_config.num_heights:
            raise ShapeMismatchError(
                f"Curve embedding expects {curve_embed.in_dim} inputs, but curves have {ect_config.num_heights} heights."
            )
        if head.in_dim != curve_embed.out_dim:
            raise ShapeMismatchError(f"Head expects {head.in_dim} inputs, embedding produces {curve_embed.out_dim}.")
        self.directions = directions
        self.ect_config = ect_config
        self.curve_embed = curve_embed
        self.head = head
        self.pool = Pool(pool)

    def __repr__(self):
        return (
            f"{type(self).__name__}(num_directions={len(self.directions)}, num_heights={self.ect_config.num_heights}, "
            f"embed={self.curve_embed.sizes}, head={self.head.sizes}, pool={self.pool.value})"
        )

    @classmethod
    def init(
        cls,
        ambient_dim: int,
        num_classes: int,
        num_directions: int = 16,
        ect_config: Optional[EctConfig] = None,
        embed_hidden: Sequence[int] = EMBED_HIDDEN,
        embed_dim: int = EMBED_DIM,
        head_hidden: Sequence[int] = HEAD_HIDDEN,
        pool: Pool = Pool.MEAN,
        constrained: bool = True,
        rng: Optional[np.random.Generator] = None,
        directions: Optional[DirectionSet] = None,
    ) -> "ClassifierModel":
        """Randomly initialized model with uniformly spread starting directions."""
        rng = np.random.default_rng(0) if rng is None else rng
        ect_config = EctConfig() if ect_config is None else ect_config
        if directions is None:
            directions = uniform_directions(ambient_dim, num_directions, seed=int(rng.integers(2**31)), constrained=constrained)
        curve_embed = MlpParams.init([ect_config.num_heights, *embed_hidden, embed_dim], rng)
        head = MlpParams.init([embed_dim, *head_hidden, num_classes], rng)
        return cls(directions, ect_config, curve_embed, head, pool)

    @property
    def num_classes(self) -> int:
        return self.head.out_dim

    def parameters(self) -> Dict[str, FloatArray]:
        params = {DIRECTIONS_KEY: self.directions.directions}
        params.update(self.curve_embed.to_dict("embed"))
        params.update(self.head.to_dict("head"))
        return params

    def with_parameters(self, params: Dict[str, FloatArray]) -> "ClassifierModel":
        """Copy with parameters replaced; keys missing from ``params`` stay as they are."""
        merged = {**self.parameters(), **params}
        directions = self.directions
        if not np.array_equal(merged[DIRECTIONS_KEY], directions.directions):
            directions = directions.with_directions(merged[DIRECTIONS_KEY])
        return ClassifierModel(
            directions,
            self.ect_config,
            MlpParams.from_dict("embed", merged, self.curve_embed.num_layers),
            MlpParams.from_dict("head", merged, self.head.num_layers),
            self.pool,
        )


@dataclass
class ForwardCache:
    curves: FloatArray
    embed_cache: MlpCache
    head_cache: MlpCache


def _pool(model: ClassifierModel, embeddings: FloatArray) -> FloatArray:
    if model.pool == Pool.SUM:
        return embeddings.sum(axis=0)
    return embeddings.mean(axis=0)


def forward_with_cache(model: ClassifierModel, complex: GeometricComplex) -> Tuple[FloatArray, ForwardCache]:
    curves = ect_smooth(complex, model.directions, model.ect_config).values
    embeddings, embed_cache = model.curve_embed.forward(curves)
    logits, head_cache = model.head.forward(_pool(model, embeddings)[None, :])
    return logits[0], ForwardCache(curves, embed_cache, head_cache)


def forward(model: ClassifierModel, complex: GeometricComplex) -> FloatArray:
    """Class logits of a single complex.

    Raises
    ------
    DimensionMismatchError
        The complex and the model's directions live in different dimensions.
    """
    return forward_with_cache(model, complex)[0]


def forward_batch(model: ClassifierModel, complexes: Sequence[GeometricComplex]) -> FloatArray:
    """``(batch, num_classes)`` logits; complexes may differ in size and simplex structure."""
    if not complexes:
        return np.zeros((0, model.num_classes))
    return np.stack([forward(model, c) for c in complexes])


def cross_entropy(logits: FloatArray, label: int) -> Tuple[float, FloatArray]:
    """Categorical cross entropy of one sample and its gradient with respect to the logits."""
    log_probs = log_softmax(logits)
    grad = np.exp(log_probs)
    grad[label] -= 1.0
    return float(-log_probs[label]), grad


def backward(
    model: ClassifierModel,
    complex: GeometricComplex,
    cache: ForwardCache,
    d_logits: FloatArray,
    learn_directions: bool = True,
) -> Dict[str, FloatArray]:
    """Gradients of a loss with respect to every model parameter, keyed like :meth:`ClassifierModel.parameters`."""
    d_pooled, head_w, head_b = model.head.backward(cache.head_cache, d_logits[None, :])
    num_curves = cache.curves.shape[0]
    d_embeddings = np.repeat(d_pooled, num_curves, axis=0)
    if model.pool == Pool.MEAN:
        d_embeddings /= num_curves
    d_curves, embed_w, embed_b = model.curve_embed.backward(cache.embed_cache, d_embeddings)

    grads = {}
    grads.update(MlpParams.grads_to_dict("embed", embed_w, embed_b))
    grads.update(MlpParams.grads_to_dict("head", head_w, head_b))
    if learn_directions:
        grads[DIRECTIONS_KEY] = ect_smooth_backward(complex, model.directions, model.ect_config, d_curves).d_directions
    return grads


def predict(model: ClassifierModel, complexes: Sequence[GeometricComplex]) -> np.ndarray:
    """Predicted labels; ties between logits go to the lowest class index."""
    return np.argmax(forward_batch(model, complexes), axis=1)

import numpy as np
import pytest

from dect.classify.mlp import MlpParams
from dect.classify.model import (
    ClassifierModel,
    Pool,
    backward,
    cross_entropy,
    forward,
    forward_batch,
    forward_with_cache,
    predict,
)
from dect.directions import DirectionSet
from dect.ect import EctConfig
from dect.exceptions import ConfigError, DimensionMismatchError, ShapeMismatchError
from dect.shapes import ShapeSpec, generate


@pytest.fixture
def model():
    return ClassifierModel.init(2, 3, num_directions=8, rng=np.random.default_rng(0))


@pytest.fixture
def cloud():
    return generate(ShapeSpec(kind="two-circles", num_points=24, noise_sigma=0.05, seed=3))


def test_init_architecture(model):
    assert model.curve_embed.sizes == [16, 32, 32, 16]
    assert model.head.sizes == [16, 25, 25, 25, 3]
    assert model.num_classes == 3
    assert model.pool == Pool.MEAN
    assert len(model.directions) == 8


def test_requires_smooth_mode(model):
    with pytest.raises(ConfigError):
        ClassifierModel(model.directions, EctConfig(mode="hard"), model.curve_embed, model.head)


def test_layer_dimensions_checked(model, rng):
    with pytest.raises(ShapeMismatchError):
        ClassifierModel(model.directions, EctConfig(num_heights=8), model.curve_embed, model.head)
    with pytest.raises(ShapeMismatchError):
        ClassifierModel(model.directions, model.ect_config, model.curve_embed, MlpParams.init([4, 3], rng))


def test_forward_shape(model, cloud):
    logits = forward(model, cloud)
    assert logits.shape == (3,)
    assert np.all(np.isfinite(logits))


def test_direction_order_irrelevant(model, cloud, rng):
    permuted = ClassifierModel(
        model.directions.permuted(rng.permutation(8)), model.ect_config, model.curve_embed, model.head, model.pool
    )
    np.testing.assert_allclose(forward(permuted, cloud), forward(model, cloud), atol=1e-9)


@pytest.mark.parametrize("pool", [Pool.SUM, Pool.MEAN])
def test_zero_head_gives_zero_logits(model, cloud, pool):
    head = MlpParams.zeros(model.head.sizes)
    zero = ClassifierModel(model.directions, model.ect_config, model.curve_embed, head, pool)
    np.testing.assert_array_equal(forward(zero, cloud), 0.0)


def test_vertex_order_irrelevant(model, cloud, rng):
    permuted = cloud.permuted(rng.permutation(cloud.num_vertices))
    np.testing.assert_allclose(forward(model, permuted), forward(model, cloud), atol=1e-12)


def test_mixed_batch_matches_single_forward(model):
    complexes = [
        generate(ShapeSpec(kind="circle", num_points=10)),
        generate(ShapeSpec(kind="square-cycle")),
        generate(ShapeSpec(kind="filled-triangle")),
    ]
    logits = forward_batch(model, complexes)
    assert logits.shape == (3, 3)
    for row, complex in zip(logits, complexes):
        np.testing.assert_array_equal(row, forward(model, complex))
    assert predict(model, complexes).shape == (3,)


def test_forward_batch_empty(model):
    assert forward_batch(model, []).shape == (0, 3)


def test_dimension_mismatch(model):
    with pytest.raises(DimensionMismatchError):
        forward(model, generate(ShapeSpec(kind="octahedron")))


def test_cross_entropy():
    loss, grad = cross_entropy(np.zeros(2), 1)
    assert loss == pytest.approx(np.log(2))
    np.testing.assert_allclose(grad, [0.5, -0.5])


def test_with_parameters_round_trip(model):
    again = model.with_parameters(model.parameters())
    assert again.directions is model.directions
    for key, value in again.parameters().items():
        np.testing.assert_array_equal(value, model.parameters()[key])


def test_backward_without_directions(model, cloud):
    logits, cache = forward_with_cache(model, cloud)
    _, d_logits = cross_entropy(logits, 0)
    grads = backward(model, cloud, cache, d_logits, learn_directions=False)
    assert "directions" not in grads
    assert set(grads) == set(model.parameters()) - {"directions"}


@pytest.mark.parametrize("constrained", [True, False])
def test_end_to_end_gradient_check(cloud, constrained):
    rng = np.random.default_rng(1)
    directions = DirectionSet([(0.6, 0.8), (-0.28, 0.96)], constrained=constrained)
    model = ClassifierModel.init(
        2,
        2,
        ect_config=EctConfig(num_heights=8),
        embed_hidden=(6,),
        embed_dim=4,
        head_hidden=(5,),
        rng=rng,
        directions=directions,
    )
    label = 1

    def loss(m):
        return cross_entropy(forward(m, cloud), label)[0]

    logits, cache = forward_with_cache(model, cloud)
    _, d_logits = cross_entropy(logits, label)
    grads = backward(model, cloud, cache, d_logits)

    eps = 1e-6
    params = model.parameters()
    for key in ("directions", "embed.w0", "head.w1", "embed.b1"):
        numeric = np.zeros_like(params[key])
        for index in np.ndindex(numeric.shape):
            plus, minus = params[key].copy(), params[key].copy()
            plus[index] += eps
            minus[index] -= eps
            numeric[index] = (loss(model.with_parameters({key: plus})) - loss(model.with_parameters({key: minus}))) / (
                2 * eps
            )
        scale = max(np.max(np.abs(numeric)), 1e-8)
        assert np.max(np.abs(grads[key] - numeric)) / scale <= 1e-3, key

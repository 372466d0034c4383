import numpy as np
import pytest

from dect.classify.mlp import MlpParams
from dect.exceptions import ShapeMismatchError


def test_init_shapes(rng):
    mlp = MlpParams.init([4, 8, 3], rng)
    assert mlp.sizes == [4, 8, 3]
    assert (mlp.in_dim, mlp.out_dim, mlp.num_layers) == (4, 3, 2)
    np.testing.assert_array_equal(mlp.biases[0], 0.0)


def test_layers_must_chain():
    with pytest.raises(ShapeMismatchError):
        MlpParams([np.zeros((4, 8)), np.zeros((7, 3))], [np.zeros(8), np.zeros(3)])
    with pytest.raises(ShapeMismatchError):
        MlpParams([np.zeros((4, 8))], [np.zeros(7)])
    with pytest.raises(ShapeMismatchError):
        MlpParams([], [])


def test_non_finite_rejected():
    with pytest.raises(ValueError):
        MlpParams([np.full((2, 2), np.nan)], [np.zeros(2)])


def test_forward_relu_hidden_identity_output():
    mlp = MlpParams([np.eye(2), np.eye(2)], [np.zeros(2), np.array([-5.0, 0.0])])
    out = mlp(np.array([[1.0, -1.0]]))
    # Hidden ReLU clips -1; output layer keeps negative values.
    np.testing.assert_array_equal(out, [[-4.0, 0.0]])


def test_zeros_gives_zero_output(rng):
    mlp = MlpParams.zeros([5, 3, 2])
    np.testing.assert_array_equal(mlp(rng.normal(size=(4, 5))), 0.0)


def test_backward_matches_finite_differences(rng):
    mlp = MlpParams.init([3, 5, 2], rng)
    x = rng.normal(size=(4, 3))
    upstream = rng.normal(size=(4, 2))

    def objective(m, inputs):
        return float(np.sum(upstream * m(inputs)))

    out, cache = mlp.forward(x)
    grad_in, weight_grads, bias_grads = mlp.backward(cache, upstream)

    eps = 1e-6
    numeric = np.zeros_like(x)
    for index in np.ndindex(x.shape):
        plus, minus = x.copy(), x.copy()
        plus[index] += eps
        minus[index] -= eps
        numeric[index] = (objective(mlp, plus) - objective(mlp, minus)) / (2 * eps)
    np.testing.assert_allclose(grad_in, numeric, atol=1e-6)

    params = mlp.to_dict("m")
    for key, analytic in MlpParams.grads_to_dict("m", weight_grads, bias_grads).items():
        numeric = np.zeros_like(analytic)
        for index in np.ndindex(analytic.shape):
            plus = {k: v.copy() for k, v in params.items()}
            minus = {k: v.copy() for k, v in params.items()}
            plus[key][index] += eps
            minus[key][index] -= eps
            numeric[index] = (
                objective(MlpParams.from_dict("m", plus, 2), x) - objective(MlpParams.from_dict("m", minus, 2), x)
            ) / (2 * eps)
        np.testing.assert_allclose(analytic, numeric, atol=1e-6)


def test_dict_round_trip(rng):
    mlp = MlpParams.init([2, 3, 1], rng)
    params = mlp.to_dict("head")
    assert sorted(params) == ["head.b0", "head.b1", "head.w0", "head.w1"]
    again = MlpParams.from_dict("head", params, mlp.num_layers)
    for a, b in zip(again.weights, mlp.weights):
        np.testing.assert_array_equal(a, b)

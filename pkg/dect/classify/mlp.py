from typing import Dict, List, Sequence, Tuple

import numpy as np
from numpy.typing import ArrayLike

from ..exceptions import ShapeMismatchError
from ..typing import FloatArray

# Per-layer activations needed by the backward pass: (layer inputs, pre-activations).
MlpCache = Tuple[List[FloatArray], List[FloatArray]]


class MlpParams:
    """Stack of dense layers; ReLU on hidden layers, identity on the output.

    Weights are stored ``(in, out)`` so a batch ``x`` of shape ``(B, in)`` maps
    to ``x @ W + b``.
    """

    def __init__(self, weights: Sequence[ArrayLike], biases: Sequence[ArrayLike]):
        weights = [np.array(w, dtype=np.float64) for w in weights]
        biases = [np.array(b, dtype=np.float64) for b in biases]
        if not weights or len(weights) != len(biases):
            raise ShapeMismatchError("An MLP needs at least one layer and one bias per weight matrix.")
        for i, (w, b) in enumerate(zip(weights, biases)):
            if w.ndim != 2 or b.shape != (w.shape[1],):
                raise ShapeMismatchError(f"Layer {i}: weight {w.shape} and bias {b.shape} do not match.")
            if i and weights[i - 1].shape[1] != w.shape[0]:
                raise ShapeMismatchError(
                    f"Layer {i} expects {w.shape[0]} inputs but layer {i - 1} produces {weights[i - 1].shape[1]}."
                )
            if not (np.all(np.isfinite(w)) and np.all(np.isfinite(b))):
                raise ValueError(f"Layer {i} has non-finite parameters.")
        self.weights = weights
        self.biases = biases

    def __repr__(self):
        return f"{type(self).__name__}(sizes={self.sizes})"

    @classmethod
    def init(cls, sizes: Sequence[int], rng: np.random.Generator) -> "MlpParams":
        """He-uniform weights, zero biases."""
        weights, biases = [], []
        for fan_in, fan_out in zip(sizes[:-1], sizes[1:]):
            limit = np.sqrt(6.0 / fan_in)
            weights.append(rng.uniform(-limit, limit, size=(fan_in, fan_out)))
            biases.append(np.zeros(fan_out))
        return cls(weights, biases)

    @classmethod
    def zeros(cls, sizes: Sequence[int]) -> "MlpParams":
        return cls(
            [np.zeros((a, b)) for a, b in zip(sizes[:-1], sizes[1:])],
            [np.zeros(b) for b in sizes[1:]],
        )

    @property
    def sizes(self) -> List[int]:
        return [self.weights[0].shape[0]] + [w.shape[1] for w in self.weights]

    @property
    def in_dim(self) -> int:
        return self.weights[0].shape[0]

    @property
    def out_dim(self) -> int:
        return self.weights[-1].shape[1]

    @property
    def num_layers(self) -> int:
        return len(self.weights)

    def forward(self, x: FloatArray) -> Tuple[FloatArray, MlpCache]:
        inputs, pre_activations = [], []
        a = x
        for i, (w, b) in enumerate(zip(self.weights, self.biases)):
            inputs.append(a)
            z = a @ w + b
            pre_activations.append(z)
            a = np.maximum(z, 0.0) if i < self.num_layers - 1 else z
        return a, (inputs, pre_activations)

    def __call__(self, x: FloatArray) -> FloatArray:
        return self.forward(x)[0]

    def backward(self, cache: MlpCache, grad_out: FloatArray) -> Tuple[FloatArray, List[FloatArray], List[FloatArray]]:
        """Returns ``(grad_input, weight_grads, bias_grads)``."""
        inputs, pre_activations = cache
        weight_grads = [np.zeros(0)] * self.num_layers
        bias_grads = [np.zeros(0)] * self.num_layers
        g = grad_out
        for i in reversed(range(self.num_layers)):
            if i < self.num_layers - 1:
                g = g * (pre_activations[i] > 0)
            weight_grads[i] = inputs[i].T @ g
            bias_grads[i] = g.sum(axis=0)
            g = g @ self.weights[i].T
        return g, weight_grads, bias_grads

    def to_dict(self, prefix: str) -> Dict[str, FloatArray]:
        out = {}
        for i, (w, b) in enumerate(zip(self.weights, self.biases)):
            out[f"{prefix}.w{i}"] = w
            out[f"{prefix}.b{i}"] = b
        return out

    @classmethod
    def from_dict(cls, prefix: str, params: Dict[str, FloatArray], num_layers: int) -> "MlpParams":
        return cls(
            [params[f"{prefix}.w{i}"] for i in range(num_layers)],
            [params[f"{prefix}.b{i}"] for i in range(num_layers)],
        )

    @staticmethod
    def grads_to_dict(prefix: str, weight_grads: List[FloatArray], bias_grads: List[FloatArray]) -> Dict[str, FloatArray]:
        out = {}
        for i, (w, b) in enumerate(zip(weight_grads, bias_grads)):
            out[f"{prefix}.w{i}"] = w
            out[f"{prefix}.b{i}"] = b
        return out

"""
Radial basis function network
A radial layer of S gaussian neurons feeding one linear output neuron.
"""

from dataclasses import dataclass, field
from typing import Tuple, Union

import numpy as np
from scipy.spatial.distance import cdist

from ..errors import ConfigurationError, DimensionMismatchError

# radbas(HALF_AMPLITUDE_DISTANCE) == 0.5
HALF_AMPLITUDE_DISTANCE = 0.8326


def radbas(n: Union[float, np.ndarray]) -> Union[float, np.ndarray]:
    """Radial basis transfer function exp(-n^2)."""
    return np.exp(-np.square(n))


def spread_to_bias(spread: float) -> float:
    """Bias that makes a neuron output 0.5 at distance `spread` from its center."""
    if not spread > 0:
        raise ConfigurationError(f"Spread must be positive, got {spread}")
    return HALF_AMPLITUDE_DISTANCE / spread


@dataclass(frozen=True)
class RbfNetwork:
    centers: np.ndarray
    biases: np.ndarray
    out_weights: np.ndarray
    out_bias: float = 0.0
    training_mse: Tuple[float, ...] = field(default=(), compare=False)

    def __post_init__(self):
        centers = np.atleast_2d(np.asarray(self.centers, dtype=np.float64))
        biases = np.asarray(self.biases, dtype=np.float64).ravel()
        out_weights = np.asarray(self.out_weights, dtype=np.float64).ravel()

        if centers.shape[0] < 1:
            raise DimensionMismatchError("An RBF network needs at least one neuron")
        if biases.size != centers.shape[0] or out_weights.size != centers.shape[0]:
            raise DimensionMismatchError(
                f"{centers.shape[0]} centers, {biases.size} biases, {out_weights.size} output weights"
            )
        if not np.all(biases > 0):
            raise ConfigurationError("RBF biases must be positive")

        for array in (centers, biases, out_weights):
            array.setflags(write=False)
        object.__setattr__(self, "centers", centers)
        object.__setattr__(self, "biases", biases)
        object.__setattr__(self, "out_weights", out_weights)
        object.__setattr__(self, "out_bias", float(self.out_bias))
        object.__setattr__(self, "training_mse", tuple(self.training_mse))

    def __eq__(self, other) -> bool:
        if not isinstance(other, RbfNetwork):
            return NotImplemented
        return (
            np.array_equal(self.centers, other.centers)
            and np.array_equal(self.biases, other.biases)
            and np.array_equal(self.out_weights, other.out_weights)
            and self.out_bias == other.out_bias
        )

    __hash__ = None

    @property
    def num_neurons(self) -> int:
        return self.centers.shape[0]

    @property
    def input_dim(self) -> int:
        return self.centers.shape[1]

    def activations(self, inputs: np.ndarray) -> np.ndarray:
        """N x S radial layer outputs for N input rows."""
        inputs = np.atleast_2d(np.asarray(inputs, dtype=np.float64))
        if inputs.shape[1] != self.input_dim:
            raise DimensionMismatchError(f"Network expects {self.input_dim}-D inputs, got {inputs.shape[1]}-D")
        return radbas(cdist(inputs, self.centers) * self.biases)

    def predict_batch(self, inputs: np.ndarray) -> np.ndarray:
        return self.activations(inputs) @ self.out_weights + self.out_bias

    def predict_vector(self, x: np.ndarray) -> float:
        return rbf_forward(self, x)


def rbf_forward(net: RbfNetwork, x: np.ndarray) -> float:
    """out_bias + sum_i w_i * radbas(||c_i - x|| * b_i) for one input vector."""
    x = np.asarray(x, dtype=np.float64).ravel()
    if x.size != net.input_dim:
        raise DimensionMismatchError(f"Network expects {net.input_dim}-D inputs, got {x.size}-D")
    distances = np.sqrt(np.sum((net.centers - x) ** 2, axis=1))
    return float(net.out_bias + np.dot(net.out_weights, radbas(distances * net.biases)))

"""
Linear prediction baseline
Biased autocorrelation, Levinson-Durbin recursion and least-squares fitting
"""

import logging
from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

import numpy as np

from ..errors import DimensionMismatchError, InvalidAutocorrelationError
from .delta import TrainingSet

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class LpcModel:
    """
    Linear predictor. Coefficients multiply the model input vector reversed,
    i.e. a_1..a_L weight x(n-1)..x(n-L).
    """
    coefficients: np.ndarray
    reflection: Optional[np.ndarray] = field(default=None, compare=False)
    residual_energy: Optional[np.ndarray] = field(default=None, compare=False)

    def __post_init__(self):
        coefficients = np.asarray(self.coefficients, dtype=np.float64).ravel()
        if coefficients.size < 1:
            raise DimensionMismatchError("LPC order must be at least 1")
        coefficients.setflags(write=False)
        object.__setattr__(self, "coefficients", coefficients)

    def __eq__(self, other) -> bool:
        if not isinstance(other, LpcModel):
            return NotImplemented
        return np.array_equal(self.coefficients, other.coefficients)

    __hash__ = None

    @property
    def order(self) -> int:
        return int(self.coefficients.size)

    @property
    def input_dim(self) -> int:
        return self.order

    def predict_vector(self, x: np.ndarray) -> float:
        """Prediction for one model input vector (oldest first)."""
        x = np.asarray(x, dtype=np.float64)
        if x.size != self.order:
            raise DimensionMismatchError(f"LPC of order {self.order} got a {x.size}-sample input")
        return float(np.dot(self.coefficients, x[::-1]))


def autocorrelation(samples: Union[Sequence[float], np.ndarray], max_lag: int) -> np.ndarray:
    """Biased estimate r(k) = (1/N) sum x(n) x(n+k), k = 0..max_lag, no window."""
    x = np.asarray(samples, dtype=np.float64).ravel()
    n = x.size
    r = np.zeros(max_lag + 1)
    for k in range(min(max_lag, n - 1) + 1):
        r[k] = np.dot(x[: n - k], x[k:]) / n
    return r


def levinson_durbin(autocorr: Union[Sequence[float], np.ndarray]) -> LpcModel:
    """
    Solve the normal equations for an order-L predictor from r(0..L).

    Raises:
        InvalidAutocorrelationError: r(0) <= 0, or the prediction error
            energy reaches zero or below before the final order
    """
    r = np.asarray(autocorr, dtype=np.float64).ravel()
    order = r.size - 1
    if order < 1:
        raise DimensionMismatchError("Need at least r(0) and r(1)")
    if not r[0] > 0:
        raise InvalidAutocorrelationError(f"r(0) must be positive, got {r[0]}")

    a = np.zeros(order)
    k = np.zeros(order)
    energy = np.zeros(order + 1)
    energy[0] = r[0]

    for i in range(order):
        if not energy[i] > 0:
            raise InvalidAutocorrelationError(
                f"Non-positive prediction error {energy[i]:.3e} at order {i}"
            )
        acc = r[i + 1] - np.dot(a[:i], r[i:0:-1])
        k[i] = acc / energy[i]
        previous = a[:i].copy()
        a[i] = k[i]
        a[:i] = previous - k[i] * previous[::-1]
        energy[i + 1] = (1.0 - k[i] * k[i]) * energy[i]

    if energy[order] < 0:
        raise InvalidAutocorrelationError(f"Negative prediction error {energy[order]:.3e} at order {order}")

    logger.debug(f"Levinson-Durbin order {order}: residual energy {energy[order]:.3e}")
    return LpcModel(coefficients=a, reflection=k, residual_energy=energy)


def fit_lpc_autocorrelation(samples: np.ndarray, order: int) -> LpcModel:
    """Autocorrelation-method LPC over the whole training region."""
    return levinson_durbin(autocorrelation(samples, order))


def fit_lpc_least_squares(data: TrainingSet) -> LpcModel:
    """
    Least-squares linear predictor without intercept on an arbitrary
    TrainingSet, augmented inputs included (minimum-norm when rank deficient).
    """
    weights, *_ = np.linalg.lstsq(data.inputs, data.targets, rcond=None)
    return LpcModel(coefficients=weights[::-1].copy())


def training_mse(model: LpcModel, data: TrainingSet) -> float:
    predictions = data.inputs[:, ::-1] @ model.coefficients
    return float(np.mean((data.targets - predictions) ** 2))

"""
Delta parameters and training-pair extraction
"""

from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from ..audio.signal_io import Signal
from ..errors import DimensionMismatchError, SignalTooShortError


@dataclass(frozen=True)
class TrainingSet:
    """
    (input vector, next sample) pairs cut from a signal.

    inputs rows are [x(i) .. x(L+i-1)], or [delta(i) .. delta(L+i-1), x(i) .. x(L+i-1)]
    when augmented; targets are x(L+i).
    """
    inputs: np.ndarray
    targets: np.ndarray
    order: int
    augmented: bool = False

    def __post_init__(self):
        inputs = np.atleast_2d(np.asarray(self.inputs, dtype=np.float64))
        targets = np.asarray(self.targets, dtype=np.float64).ravel()
        expected = self.input_dim_for(self.order, self.augmented)
        if inputs.shape[1] != expected:
            raise DimensionMismatchError(f"Expected {expected} input columns, got {inputs.shape[1]}")
        if inputs.shape[0] != targets.size:
            raise DimensionMismatchError("inputs and targets must have the same number of rows")
        object.__setattr__(self, "inputs", inputs)
        object.__setattr__(self, "targets", targets)

    def __len__(self) -> int:
        return int(self.targets.size)

    @property
    def input_dim(self) -> int:
        return self.inputs.shape[1]

    @staticmethod
    def input_dim_for(order: int, augmented: bool) -> int:
        return 2 * order if augmented else order


def compute_delta(window: Union[Sequence[float], np.ndarray], order: int = None) -> np.ndarray:
    """
    First-order finite differences of L+1 consecutive samples.

    Args:
        window: L+1 samples, oldest first
        order: L; when given, the window length is checked against it

    Returns:
        L differences, result[k] = window[k+1] - window[k]
    """
    window = np.asarray(window, dtype=np.float64).ravel()
    if order is not None and window.size != order + 1:
        raise DimensionMismatchError(f"Delta window needs {order + 1} samples, got {window.size}")
    if window.size < 2:
        raise DimensionMismatchError("Delta window needs at least 2 samples")
    return np.diff(window)


def history_length(order: int, augmented: bool) -> int:
    """Raw samples consumed per prediction: L, or L+1 with deltas."""
    return order + 1 if augmented else order


def assemble_input(history: np.ndarray, order: int, augmented: bool) -> np.ndarray:
    """Model input vector from the most recent samples (most recent last)."""
    history = np.asarray(history, dtype=np.float64)
    window = history[history.size - history_length(order, augmented):]
    if not augmented:
        return window
    return np.concatenate((np.diff(window), window[1:]))


def make_training_set(
    signal: Union[Signal, Sequence[float], np.ndarray],
    order: int,
    augmented: bool = False,
) -> TrainingSet:
    """
    Build the (inputs, target) pairs used to fit a predictor of order L.

    The augmented set consumes one extra history sample per row, so it holds
    one row fewer than the plain set on the same signal.
    """
    samples = signal.samples if isinstance(signal, Signal) else np.asarray(signal, dtype=np.float64).ravel()
    if order < 1:
        raise DimensionMismatchError(f"Prediction order must be positive, got {order}")

    span = history_length(order, augmented)
    if samples.size <= span + 1:
        raise SignalTooShortError(
            f"Signal of {samples.size} samples is too short for order {order}"
            f"{' with deltas' if augmented else ''}"
        )

    windows = sliding_window_view(samples[:-1], span)
    targets = samples[span:]
    if augmented:
        inputs = np.hstack((np.diff(windows, axis=1), windows[:, 1:]))
    else:
        inputs = windows

    return TrainingSet(inputs=np.ascontiguousarray(inputs), targets=targets.copy(), order=order, augmented=augmented)

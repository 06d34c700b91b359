"""
Sample predictors
Uniform wrapper over LPC and RBF models with optional delta augmentation
"""

import logging
from dataclasses import dataclass, replace
from typing import Dict, Union

import numpy as np

from ..audio.signal_io import Signal
from ..config import codec_settings, rbf_settings
from ..dsp.delta import TrainingSet, assemble_input, history_length, make_training_set
from ..dsp.lpc import LpcModel, fit_lpc_autocorrelation, fit_lpc_least_squares
from ..errors import ConfigurationError, DimensionMismatchError, InsufficientHistoryError
from ..rbf.network import RbfNetwork
from ..rbf.training import train_rbf1, train_rbf2

logger = logging.getLogger(__name__)

PREDICTOR_KINDS = ("lpc", "rbf1", "rbf2")


def clamp_unit(value: float) -> float:
    return -1.0 if value < -1.0 else (1.0 if value > 1.0 else value)


@dataclass(frozen=True)
class PredictorConfig:
    """How to fit one predictor."""
    kind: str = "lpc"
    order: int = codec_settings.prediction_order
    augmented: bool = False
    neurons: int = rbf_settings.neurons
    spread: float = rbf_settings.spread
    em_epochs: int = rbf_settings.em_epochs
    kmeans_iters: int = rbf_settings.kmeans_iters
    goal_mse: float = rbf_settings.goal_mse
    output_bias: bool = rbf_settings.output_bias
    max_training_vectors: int = rbf_settings.max_training_vectors

    def __post_init__(self):
        if self.kind not in PREDICTOR_KINDS:
            raise ConfigurationError(f"Unknown predictor kind '{self.kind}', expected one of {PREDICTOR_KINDS}")
        if self.order < 1:
            raise ConfigurationError(f"Prediction order must be positive, got {self.order}")
        if self.kind != "lpc" and self.neurons < 1:
            raise ConfigurationError(f"Neuron count must be positive, got {self.neurons}")
        if self.kind == "rbf1" and not self.spread > 0:
            raise ConfigurationError(f"Spread must be positive, got {self.spread}")
        if self.kind == "rbf2" and self.em_epochs < 1:
            raise ConfigurationError(f"EM epochs must be at least 1, got {self.em_epochs}")

    @property
    def history_length(self) -> int:
        return history_length(self.order, self.augmented)

    @property
    def label(self) -> str:
        """Name used in reports; delta and order are reported separately."""
        if self.kind == "rbf1":
            return f"rbf1(spread={self.spread:g},S={self.neurons})"
        if self.kind == "rbf2":
            return f"rbf2(S={self.neurons})"
        return "lpc"

    def with_options(self, **options) -> "PredictorConfig":
        return replace(self, **options)


@dataclass(frozen=True)
class Predictor:
    """A fitted model plus the history layout it consumes."""
    model: Union[LpcModel, RbfNetwork]
    order: int
    augmented: bool = False

    def __post_init__(self):
        expected = TrainingSet.input_dim_for(self.order, self.augmented)
        if self.model.input_dim != expected:
            raise DimensionMismatchError(
                f"Model takes {self.model.input_dim}-D inputs, order {self.order}"
                f"{' with deltas' if self.augmented else ''} needs {expected}"
            )

    @property
    def kind(self) -> str:
        return "lpc" if isinstance(self.model, LpcModel) else "rbf"

    @property
    def history_length(self) -> int:
        return history_length(self.order, self.augmented)

    def input_vector(self, history: np.ndarray) -> np.ndarray:
        history = np.asarray(history, dtype=np.float64)
        if history.size < self.history_length:
            raise InsufficientHistoryError(
                f"Predictor needs {self.history_length} past samples, got {history.size}"
            )
        return assemble_input(history, self.order, self.augmented)

    def predict(self, history: np.ndarray) -> float:
        return predict(self, history)


def predict(p: Predictor, history: np.ndarray) -> float:
    """
    Next-sample prediction from past samples (most recent last), clamped to [-1, 1].
    """
    return clamp_unit(p.model.predict_vector(p.input_vector(history)))


def _fit_model(config: PredictorConfig, data: TrainingSet, samples: np.ndarray, seed: int):
    if config.kind == "lpc":
        if config.augmented:
            return fit_lpc_least_squares(data)
        return fit_lpc_autocorrelation(samples, config.order)
    if config.kind == "rbf1":
        return train_rbf1(
            data,
            max_neurons=config.neurons,
            spread=config.spread,
            goal_mse=config.goal_mse,
            output_bias=config.output_bias,
            max_vectors=config.max_training_vectors,
        )
    return train_rbf2(
        data,
        neurons=config.neurons,
        em_epochs=config.em_epochs,
        seed=seed,
        kmeans_iters=config.kmeans_iters,
        output_bias=config.output_bias,
    )


def fit_predictor(config: PredictorConfig, signal: Signal, seed: int = 0) -> Predictor:
    """
    Fit a predictor on the clean signal over its whole duration.
    """
    samples = signal.samples if isinstance(signal, Signal) else np.asarray(signal, dtype=np.float64)
    data = make_training_set(samples, config.order, config.augmented)
    model = _fit_model(config, data, samples, seed)
    logger.info(f"Fitted {config.label} order {config.order}{' +delta' if config.augmented else ''} on {len(data)} pairs")
    return Predictor(model=model, order=config.order, augmented=config.augmented)


def parse_predictor_config(text: str, **defaults) -> PredictorConfig:
    """
    Parse `kind[:key=value,...]`, e.g. `rbf1:spread=0.4,neurons=50`.
    Keyword defaults (order, augmented, ...) apply unless the text overrides them.
    """
    kind, _, options = text.strip().partition(":")
    values: Dict[str, object] = dict(defaults)
    casts = {
        "order": int, "neurons": int, "em_epochs": int, "epochs": int,
        "kmeans_iters": int, "max_training_vectors": int,
        "spread": float, "goal_mse": float,
        "output_bias": lambda v: v.lower() in ("1", "true", "yes", "on"),
        "augmented": lambda v: v.lower() in ("1", "true", "yes", "on"),
    }
    for item in filter(None, (o.strip() for o in options.split(","))):
        key, sep, raw = item.partition("=")
        key = key.strip()
        if not sep or key not in casts:
            raise ConfigurationError(f"Bad predictor option '{item}' in '{text}'")
        try:
            value = casts[key](raw.strip())
        except ValueError as e:
            raise ConfigurationError(f"Bad value for '{key}' in '{text}': {e}") from e
        values["em_epochs" if key == "epochs" else key] = value
    return PredictorConfig(kind=kind.strip().lower(), **values)

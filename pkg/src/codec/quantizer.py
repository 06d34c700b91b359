"""
Adaptive mid-rise scalar quantizer with one-word-memory step multipliers
"""

import math
from dataclasses import dataclass, replace
from typing import Sequence, Tuple

from ..config import MULTIPLIER_TABLES, SUPPORTED_NQ_BITS, codec_settings
from ..errors import ConfigurationError


@dataclass(frozen=True)
class QuantizerState:
    step: float
    nq_bits: int
    multipliers: Tuple[float, ...]
    step_min: float
    step_max: float

    def __post_init__(self):
        if self.nq_bits not in SUPPORTED_NQ_BITS:
            raise ConfigurationError(f"nq_bits must be one of {SUPPORTED_NQ_BITS}, got {self.nq_bits}")
        if len(self.multipliers) != self.levels:
            raise ConfigurationError(f"Nq={self.nq_bits} needs {self.levels} multipliers, got {len(self.multipliers)}")
        if not all(m > 0 for m in self.multipliers):
            raise ConfigurationError("Step multipliers must be positive")
        if not 0 < self.step_min <= self.step_max:
            raise ConfigurationError(f"Invalid step bounds [{self.step_min}, {self.step_max}]")
        if not self.step_min <= self.step <= self.step_max:
            raise ConfigurationError(f"Step {self.step} outside [{self.step_min}, {self.step_max}]")
        object.__setattr__(self, "multipliers", tuple(float(m) for m in self.multipliers))

    @property
    def levels(self) -> int:
        """Magnitude cells per sign."""
        return 2 ** (self.nq_bits - 1)

    @classmethod
    def initial(
        cls,
        nq_bits: int,
        initial_step: float = None,
        step_min: float = None,
        step_max: float = None,
        multipliers: Sequence[float] = None,
    ) -> "QuantizerState":
        if nq_bits not in MULTIPLIER_TABLES and multipliers is None:
            raise ConfigurationError(f"No multiplier table for Nq={nq_bits}")
        return cls(
            step=codec_settings.initial_step if initial_step is None else initial_step,
            nq_bits=nq_bits,
            multipliers=tuple(MULTIPLIER_TABLES[nq_bits] if multipliers is None else multipliers),
            step_min=codec_settings.step_min if step_min is None else step_min,
            step_max=codec_settings.step_max if step_max is None else step_max,
        )

    def adapted(self, magnitude: int) -> "QuantizerState":
        step = self.step * self.multipliers[magnitude]
        return replace(self, step=min(max(step, self.step_min), self.step_max))


def _reconstruction(state: QuantizerState, negative: bool, magnitude: int) -> float:
    level = (magnitude + 0.5) * state.step
    return -level if negative else level


def quantize(state: QuantizerState, e: float) -> Tuple[int, float, QuantizerState]:
    """
    Returns:
        (code, quantized residual, adapted state); the code carries the sign
        in its top bit and the magnitude cell in the rest
    """
    if math.isnan(e):
        raise ValueError("Cannot quantize NaN")
    negative = e < 0
    cell = abs(e) / state.step
    magnitude = state.levels - 1 if cell >= state.levels else int(math.floor(cell))
    code = (int(negative) << (state.nq_bits - 1)) | magnitude
    return code, _reconstruction(state, negative, magnitude), state.adapted(magnitude)


def dequantize(state: QuantizerState, code: int) -> Tuple[float, QuantizerState]:
    """Decoder mirror of quantize: same residual and same state update."""
    code = int(code)
    if not 0 <= code < 2 ** state.nq_bits:
        raise ValueError(f"Code {code} does not fit in {state.nq_bits} bits")
    negative = bool(code >> (state.nq_bits - 1))
    magnitude = code & (state.levels - 1)
    return _reconstruction(state, negative, magnitude), state.adapted(magnitude)

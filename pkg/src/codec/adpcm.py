"""
ADPCM encoder and decoder
Closed-loop prediction on the reconstructed signal with an adaptive
multiplier quantizer; the predictor travels in the bitstream header.
"""

import logging
from dataclasses import dataclass, field
from typing import Optional, Tuple

import numpy as np

from ..audio.bitstream import Bitstream, CodecHeader
from ..audio.signal_io import Signal
from ..config import DEFAULT_SEED, MULTIPLIER_TABLES, SUPPORTED_NQ_BITS, codec_settings
from ..errors import BitstreamError, ConfigurationError, SignalTooShortError
from ..predictors.committee import AnyConfig, AnyPredictor, Committee, deserialize_predictor, serialize_predictor
from ..predictors.predictor import Predictor, PredictorConfig, clamp_unit
from .quantizer import QuantizerState, dequantize, quantize

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CodecConfig:
    nq_bits: int = codec_settings.nq_bits
    prediction_order: int = codec_settings.prediction_order
    predictor: AnyConfig = field(default_factory=PredictorConfig)
    initial_step: float = codec_settings.initial_step
    step_min: float = codec_settings.step_min
    step_max: float = codec_settings.step_max
    seed: int = DEFAULT_SEED
    multipliers: Optional[Tuple[float, ...]] = None

    def __post_init__(self):
        if self.nq_bits not in SUPPORTED_NQ_BITS:
            raise ConfigurationError(f"nq_bits must be one of {SUPPORTED_NQ_BITS}, got {self.nq_bits}")
        if self.prediction_order < 1:
            raise ConfigurationError(f"Prediction order must be positive, got {self.prediction_order}")
        # Validates step bounds and the multiplier table
        self.initial_state()

    @property
    def rate_bps(self) -> int:
        return self.nq_bits * codec_settings.sample_rate_hz

    def table(self) -> Tuple[float, ...]:
        return tuple(self.multipliers) if self.multipliers is not None else MULTIPLIER_TABLES[self.nq_bits]

    def initial_state(self) -> QuantizerState:
        return QuantizerState(
            step=self.initial_step,
            nq_bits=self.nq_bits,
            multipliers=self.table(),
            step_min=self.step_min,
            step_max=self.step_max,
        )


def _check_predictor(predictor) -> None:
    if not isinstance(predictor, (Predictor, Committee)):
        raise ConfigurationError(f"Expected a fitted predictor or committee, got {type(predictor).__name__}")


def adpcm_encode(
    signal: Signal,
    predictor: AnyPredictor,
    config: CodecConfig,
) -> Tuple[Bitstream, Signal]:
    """
    Encode a normalized signal.

    The first history-length samples are sent verbatim in the header; every
    later sample is predicted from the reconstruction, the residual is
    quantized and the reconstruction is clamped to [-1, 1].

    Returns:
        (bitstream, encoder-side reconstruction)
    """
    _check_predictor(predictor)
    if predictor.order != config.prediction_order:
        raise ConfigurationError(
            f"Codec configured for order {config.prediction_order}, predictor has order {predictor.order}"
        )
    payload = serialize_predictor(predictor)
    # Run on exactly the parameters the decoder will see
    predictor = deserialize_predictor(payload)

    x = signal.samples
    n_total = x.size
    seed_len = predictor.history_length
    if n_total < seed_len:
        raise SignalTooShortError(f"Signal of {n_total} samples is shorter than the predictor history {seed_len}")

    recon = np.empty(n_total)
    recon[:seed_len] = x[:seed_len]
    codes = np.empty(n_total - seed_len, dtype=np.uint8)

    state = config.initial_state()
    for n in range(seed_len, n_total):
        prediction = predictor.predict(recon[n - seed_len:n])
        code, residual, state = quantize(state, x[n] - prediction)
        recon[n] = clamp_unit(prediction + residual)
        codes[n - seed_len] = code

    header = CodecHeader(
        nq_bits=config.nq_bits,
        prediction_order=seed_len,
        num_samples=n_total,
        gain=signal.gain,
        initial_step=config.initial_step,
        step_min=config.step_min,
        step_max=config.step_max,
        multipliers=config.table(),
        seed_samples=tuple(x[:seed_len]),
        predictor_payload=payload,
        sample_rate_hz=signal.sample_rate_hz,
    )
    logger.debug(f"Encoded {codes.size} samples at Nq={config.nq_bits}, final step {state.step:.3e}")
    reconstructed = Signal(samples=recon, sample_rate_hz=signal.sample_rate_hz, gain=signal.gain)
    return Bitstream(header=header, codes=codes), reconstructed


def adpcm_decode(bits: Bitstream) -> Signal:
    """
    Rebuild the encoder-side reconstruction from a bitstream.

    The returned Signal carries the header gain; `denormalized()` gives the
    original amplitude scale.
    """
    header = bits.header
    predictor = deserialize_predictor(header.predictor_payload)
    seed_len = header.prediction_order
    if predictor.history_length != seed_len:
        raise BitstreamError(
            f"Header seed of {seed_len} samples does not match predictor history {predictor.history_length}"
        )

    recon = np.empty(header.num_samples)
    recon[:seed_len] = header.seed_samples

    try:
        state = QuantizerState(
            step=header.initial_step,
            nq_bits=header.nq_bits,
            multipliers=header.multipliers,
            step_min=header.step_min,
            step_max=header.step_max,
        )
    except ConfigurationError as e:
        raise BitstreamError(f"Invalid quantizer parameters in header: {e}") from e
    for n, code in enumerate(bits.codes, start=seed_len):
        prediction = predictor.predict(recon[n - seed_len:n])
        residual, state = dequantize(state, code)
        recon[n] = clamp_unit(prediction + residual)

    return Signal(samples=recon, sample_rate_hz=header.sample_rate_hz, gain=header.gain)

"""
Signal I/O
Normalization, gain bookkeeping and PCM16 mono WAV reading/writing
"""

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence, Union

import numpy as np
from scipy.io import wavfile

from ..config import codec_settings
from ..errors import SilentSignalError, WavFormatError

logger = logging.getLogger(__name__)

PCM16_SCALE = 32768.0
AMPLITUDE_SLACK = 1e-12


@dataclass(frozen=True)
class Signal:
    """Normalized mono samples plus the gain that normalization removed."""
    samples: np.ndarray
    sample_rate_hz: int = 8000
    gain: float = 1.0

    def __post_init__(self):
        samples = np.array(self.samples, dtype=np.float64).ravel()
        if samples.size and np.max(np.abs(samples)) > 1.0 + AMPLITUDE_SLACK:
            raise ValueError("Signal samples must lie in [-1, 1]")
        if not self.gain > 0:
            raise ValueError(f"Signal gain must be positive, got {self.gain}")
        if int(self.sample_rate_hz) <= 0:
            raise ValueError(f"Sample rate must be positive, got {self.sample_rate_hz}")
        samples.setflags(write=False)
        object.__setattr__(self, "samples", samples)
        object.__setattr__(self, "sample_rate_hz", int(self.sample_rate_hz))
        object.__setattr__(self, "gain", float(self.gain))

    def __len__(self) -> int:
        return int(self.samples.size)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Signal):
            return NotImplemented
        return (
            self.sample_rate_hz == other.sample_rate_hz
            and self.gain == other.gain
            and np.array_equal(self.samples, other.samples)
        )

    __hash__ = None

    def denormalized(self) -> np.ndarray:
        """Samples in the original amplitude scale."""
        return self.samples * self.gain


def normalize(
    raw: Union[Sequence[float], np.ndarray, Signal],
    sample_rate_hz: int = 8000,
) -> Signal:
    """
    Scale a sample sequence so that its maximum absolute value is exactly 1.

    A Signal argument is normalized from its samples, so applying normalize
    to an already normalized Signal returns it with gain 1.
    """
    if isinstance(raw, Signal):
        sample_rate_hz = raw.sample_rate_hz
        raw = raw.samples

    values = np.asarray(raw, dtype=np.float64).ravel()
    if values.size == 0:
        raise SilentSignalError("Cannot normalize an empty signal")

    peak = float(np.max(np.abs(values)))
    if peak == 0.0 or not np.isfinite(peak):
        raise SilentSignalError("Cannot normalize an all-zero signal")

    samples = values / peak
    return Signal(samples=samples, sample_rate_hz=sample_rate_hz, gain=peak)


def load_wav(path: Union[str, Path]) -> Signal:
    """
    Read a 16-bit PCM mono WAV file.

    Returns:
        Signal with samples divided by 32768 and gain 1
    """
    path = Path(path)
    try:
        rate, data = wavfile.read(path)
    except FileNotFoundError:
        raise
    except ValueError as e:
        # scipy reports unsupported compression codes and malformed chunks as ValueError
        raise WavFormatError(f"{path}: unsupported WAV encoding ({e})") from e

    if data.dtype != np.int16:
        raise WavFormatError(f"{path}: expected 16-bit PCM, found {data.dtype}")
    if data.ndim != 1:
        raise WavFormatError(f"{path}: expected mono, found {data.shape[1]} channels")

    if rate != codec_settings.sample_rate_hz:
        logger.warning(f"{path}: sample rate {rate} Hz, codec defaults assume {codec_settings.sample_rate_hz} Hz")

    samples = data.astype(np.float64) / PCM16_SCALE
    logger.debug(f"Loaded {samples.size} samples from {path}")
    return Signal(samples=samples, sample_rate_hz=rate, gain=1.0)


def save_wav(path: Union[str, Path], signal: Signal) -> None:
    """Write a Signal, denormalized by its gain, as 16-bit PCM mono."""
    path = Path(path)
    scaled = np.round(signal.denormalized() * PCM16_SCALE)
    pcm = np.clip(scaled, -PCM16_SCALE, PCM16_SCALE - 1).astype(np.int16)

    if signal.sample_rate_hz != codec_settings.sample_rate_hz:
        logger.warning(f"{path}: writing {signal.sample_rate_hz} Hz audio")

    wavfile.write(path, signal.sample_rate_hz, pcm)
    logger.debug(f"Wrote {pcm.size} samples to {path}")

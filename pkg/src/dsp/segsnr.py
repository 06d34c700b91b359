"""
Segmental SNR
Per-frame SNR over complete frames, with sentence and corpus aggregation
"""

import logging
from dataclasses import dataclass
from typing import Iterable, Sequence, Union

import numpy as np

from ..audio.signal_io import Signal
from ..config import eval_settings
from ..errors import ConfigurationError, DimensionMismatchError, NoRetainedFramesError

logger = logging.getLogger(__name__)

ArrayLike = Union[Signal, Sequence[float], np.ndarray]


@dataclass(frozen=True)
class SegSnrReport:
    per_frame_db: np.ndarray
    mean_db: float
    std_db: float
    frame_len: int

    @property
    def num_frames(self) -> int:
        return int(self.per_frame_db.size)


@dataclass(frozen=True)
class CorpusSnrSummary:
    """
    Two aggregations of a set of sentence reports: across sentence means
    (mean of means, population std of means) and across pooled frames.
    """
    sentence_mean_db: float
    sentence_std_db: float
    frame_mean_db: float
    frame_std_db: float
    num_sentences: int


def _as_array(x: ArrayLike) -> np.ndarray:
    if isinstance(x, Signal):
        return x.samples
    return np.asarray(x, dtype=np.float64).ravel()


def _ratio_db(signal_energy: np.ndarray, noise_energy: np.ndarray, clamp_db: float) -> np.ndarray:
    with np.errstate(divide="ignore"):
        ratio_db = 10.0 * np.log10(signal_energy / noise_energy)
    return np.minimum(ratio_db, clamp_db)


def segsnr(
    original: ArrayLike,
    reconstructed: ArrayLike,
    frame_len: int = None,
) -> SegSnrReport:
    """
    Segmental SNR in dB.

    Frames with original energy below the floor are skipped, each frame's
    SNR is clamped at 80 dB, and a trailing partial frame is dropped.
    """
    frame_len = eval_settings.frame_len if frame_len is None else int(frame_len)
    if frame_len < 1:
        raise ConfigurationError(f"frame_len must be at least 1, got {frame_len}")

    x = _as_array(original)
    y = _as_array(reconstructed)
    if x.size != y.size:
        raise DimensionMismatchError(f"Length mismatch: {x.size} vs {y.size}")

    num_frames = x.size // frame_len
    usable = num_frames * frame_len
    frames = x[:usable].reshape(num_frames, frame_len)
    errors = frames - y[:usable].reshape(num_frames, frame_len)

    signal_energy = np.sum(frames * frames, axis=1)
    noise_energy = np.sum(errors * errors, axis=1)

    retained = signal_energy >= eval_settings.energy_floor
    if not np.any(retained):
        raise NoRetainedFramesError(
            f"No frame of {frame_len} samples has energy above {eval_settings.energy_floor}"
        )

    per_frame = _ratio_db(signal_energy[retained], noise_energy[retained], eval_settings.snr_clamp_db)
    skipped = num_frames - per_frame.size
    if skipped:
        logger.debug(f"SEGSNR skipped {skipped} silent frames of {num_frames}")

    return SegSnrReport(
        per_frame_db=per_frame,
        mean_db=float(np.mean(per_frame)),
        std_db=float(np.std(per_frame)),
        frame_len=frame_len,
    )


def snr(original: ArrayLike, reconstructed: ArrayLike) -> float:
    """Whole-signal SNR in dB with the same clamp as SEGSNR."""
    x = _as_array(original)
    y = _as_array(reconstructed)
    if x.size != y.size:
        raise DimensionMismatchError(f"Length mismatch: {x.size} vs {y.size}")
    signal_energy = np.sum(x * x)
    if signal_energy < eval_settings.energy_floor:
        raise NoRetainedFramesError("Original signal is silent")
    noise_energy = np.sum((x - y) ** 2)
    return float(_ratio_db(np.array([signal_energy]), np.array([noise_energy]), eval_settings.snr_clamp_db)[0])


def aggregate_reports(reports: Iterable[SegSnrReport]) -> CorpusSnrSummary:
    reports = list(reports)
    if not reports:
        raise NoRetainedFramesError("No sentence reports to aggregate")
    means = np.array([r.mean_db for r in reports])
    pooled = np.concatenate([r.per_frame_db for r in reports])
    return CorpusSnrSummary(
        sentence_mean_db=float(np.mean(means)),
        sentence_std_db=float(np.std(means)),
        frame_mean_db=float(np.mean(pooled)),
        frame_std_db=float(np.std(pooled)),
        num_sentences=len(reports),
    )

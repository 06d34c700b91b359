"""
Corpus Service
Manifest loading, sentence caching and the synthetic desk corpus
"""

import logging
from pathlib import Path
from typing import Dict, List, NamedTuple, Optional, Sequence, Union

import numpy as np
from scipy.signal import lfilter

from ..audio.signal_io import Signal, load_wav, normalize, save_wav
from ..config import DEFAULT_SEED, codec_settings, corpus_settings
from ..errors import ConfigurationError

logger = logging.getLogger(__name__)

# Formant centre ranges (Hz) and bandwidth range for the synthetic vocal tract
FORMANT_RANGES = ((300.0, 800.0), (900.0, 2200.0), (2300.0, 3200.0))
BANDWIDTH_RANGE = (60.0, 140.0)

# Raised-cosine glottal pulse width as a share of the pitch period
OPEN_QUOTIENT = 0.5
# Breath noise standard deviation against a unit glottal pulse
ASPIRATION_LEVEL = 0.05


class Sentence(NamedTuple):
    name: str
    signal: Signal


def resonator(frequency_hz: float, bandwidth_hz: float, sample_rate_hz: int) -> np.ndarray:
    """Denominator of a two-pole resonance."""
    radius = np.exp(-np.pi * bandwidth_hz / sample_rate_hz)
    theta = 2.0 * np.pi * frequency_hz / sample_rate_hz
    return np.array([1.0, -2.0 * radius * np.cos(theta), radius * radius])


def synthesize_ar(
    coefficients: Sequence[float],
    num_samples: int,
    seed: int = DEFAULT_SEED,
    sample_rate_hz: int = 8000,
) -> Signal:
    """
    Normalized AR process x(n) = sum a_k x(n-k) + w(n) driven by white noise,
    after discarding a warm-up of 500 samples.
    """
    warmup = 500
    rng = np.random.default_rng(seed)
    noise = rng.standard_normal(num_samples + warmup)
    x = lfilter([1.0], np.concatenate(([1.0], -np.asarray(coefficients, dtype=np.float64))), noise)
    return normalize(x[warmup:], sample_rate_hz)


def synthesize_pulse_train(
    period: int,
    num_samples: int,
    seed: int = DEFAULT_SEED,
    sample_rate_hz: int = 8000,
    noise_level: float = 0.01,
) -> Signal:
    """Strictly periodic pulses through a single formant, plus a little noise."""
    rng = np.random.default_rng(seed)
    excitation = np.zeros(num_samples)
    excitation[::period] = 1.0
    excitation += noise_level * rng.standard_normal(num_samples)
    x = lfilter([1.0], resonator(500.0, 100.0, sample_rate_hz), excitation)
    return normalize(x, sample_rate_hz)


class CorpusService:
    """
    Service for corpus access.
    Caches normalized sentences by path so sweeps load every WAV once.
    """

    def __init__(self):
        self._cache: Dict[Path, Sentence] = {}

    def load_manifest(self, manifest_path: Union[str, Path]) -> List[Path]:
        """
        One WAV path per line; blank lines and `#` comments are ignored,
        relative paths resolve against the manifest's directory.
        """
        manifest_path = Path(manifest_path)
        base = manifest_path.parent
        paths = []
        for line in manifest_path.read_text(encoding="utf-8").splitlines():
            entry = line.split("#", 1)[0].strip()
            if not entry:
                continue
            path = Path(entry)
            paths.append(path if path.is_absolute() else base / path)
        if not paths:
            raise ConfigurationError(f"Manifest {manifest_path} lists no sentences")
        logger.info(f"Manifest {manifest_path}: {len(paths)} sentences")
        return paths

    def load_sentence(self, path: Union[str, Path]) -> Sentence:
        path = Path(path)
        if path not in self._cache:
            self._cache[path] = Sentence(name=path.stem, signal=normalize(load_wav(path)))
        return self._cache[path]

    def load_corpus(self, manifest_path: Union[str, Path]) -> List[Sentence]:
        return [self.load_sentence(p) for p in self.load_manifest(manifest_path)]

    def synthesize_sentence(
        self,
        index: int,
        seed: int = DEFAULT_SEED,
        duration_s: float = None,
        sample_rate_hz: int = None,
    ) -> Signal:
        """
        Speech-like sentence: raised-cosine glottal pulses at a drifting pitch
        period plus breath noise, through three formant resonances, under a
        syllabic envelope.
        """
        duration_s = corpus_settings.duration_s if duration_s is None else duration_s
        sample_rate_hz = codec_settings.sample_rate_hz if sample_rate_hz is None else sample_rate_hz
        num_samples = int(round(duration_s * sample_rate_hz))
        if num_samples < 2:
            raise ConfigurationError(f"Sentence duration {duration_s}s is too short")

        rng = np.random.default_rng([seed, index])
        low, high = corpus_settings.pitch_range
        base_period = rng.uniform(low, high)
        drift_rate = rng.uniform(0.5, 2.0)

        # Pulse positions with a slowly drifting pitch period
        onsets = np.zeros(num_samples)
        position = 0.0
        while position < num_samples:
            onsets[int(position)] = 1.0
            t = position / sample_rate_hz
            position += base_period * (1.0 + 0.08 * np.sin(2.0 * np.pi * drift_rate * t))

        width = max(4, int(OPEN_QUOTIENT * base_period))
        excitation = lfilter(np.hanning(width), [1.0], onsets)
        excitation += ASPIRATION_LEVEL * rng.standard_normal(num_samples)

        x = excitation
        for low_f, high_f in FORMANT_RANGES:
            frequency = rng.uniform(low_f, high_f)
            bandwidth = rng.uniform(*BANDWIDTH_RANGE)
            x = lfilter([1.0], resonator(frequency, bandwidth, sample_rate_hz), x)

        # Syllables of 150-300 ms
        t = np.arange(num_samples) / sample_rate_hz
        syllable_rate = rng.uniform(3.5, 6.5)
        envelope = 0.15 + 0.85 * np.sin(np.pi * syllable_rate * t) ** 2
        x = x * envelope + 1e-3 * rng.standard_normal(num_samples)

        return normalize(x, sample_rate_hz)

    def desk_corpus(self, count: int = None, seed: int = DEFAULT_SEED, duration_s: float = None) -> List[Sentence]:
        count = corpus_settings.sentences if count is None else count
        return [
            Sentence(name=f"desk{i + 1:02d}", signal=self.synthesize_sentence(i, seed, duration_s))
            for i in range(count)
        ]

    def write_desk_corpus(
        self,
        directory: Union[str, Path],
        count: int = None,
        seed: int = DEFAULT_SEED,
        duration_s: float = None,
    ) -> Path:
        """
        Write the desk corpus as PCM16 WAVs plus a manifest.

        Returns:
            Path of the manifest
        """
        directory = Path(directory)
        directory.mkdir(parents=True, exist_ok=True)

        lines = ["# NLPC desk corpus: synthetic 8 kHz sentences", f"# seed {seed}"]
        for sentence in self.desk_corpus(count, seed, duration_s):
            wav_path = directory / f"{sentence.name}.wav"
            # Peak just under full scale so PCM16 does not clip
            save_wav(wav_path, Signal(sentence.signal.samples, sentence.signal.sample_rate_hz, gain=0.9))
            lines.append(wav_path.name)

        manifest = directory / corpus_settings.manifest_name
        manifest.write_text("\n".join(lines) + "\n", encoding="utf-8")
        logger.info(f"Wrote {len(lines) - 2} desk sentences and {manifest}")
        return manifest


# Singleton instance
_corpus_service: Optional[CorpusService] = None


def get_corpus_service() -> CorpusService:
    """Get or create singleton CorpusService instance."""
    global _corpus_service
    if _corpus_service is None:
        _corpus_service = CorpusService()
    return _corpus_service

"""
Shared fixtures: synthetic signals and a small on-disk corpus
"""

import os
import sys

import numpy as np
import pytest

# Add project root to path
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from src.audio.signal_io import Signal, save_wav
from src.services.corpus_service import CorpusService, Sentence, synthesize_ar

AR2_COEFFICIENTS = (1.3, -0.6)


@pytest.fixture(autouse=True)
def _no_seed_override(monkeypatch):
    monkeypatch.delenv("NLPC_SEED", raising=False)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture(scope="session")
def ar2_signal() -> Signal:
    return synthesize_ar(AR2_COEFFICIENTS, 4000, seed=7)


@pytest.fixture(scope="session")
def short_sentence() -> Sentence:
    return Sentence(name="short", signal=CorpusService().synthesize_sentence(0, seed=11, duration_s=0.25))


@pytest.fixture
def wav_file(tmp_path, ar2_signal):
    path = tmp_path / "ar2.wav"
    save_wav(path, Signal(ar2_signal.samples[:2000], ar2_signal.sample_rate_hz, gain=0.8))
    return path


@pytest.fixture
def corpus_manifest(tmp_path):
    return CorpusService().write_desk_corpus(tmp_path / "desk", count=2, seed=3, duration_s=0.25)


@pytest.fixture(scope="session")
def desk_sentences():
    return CorpusService().desk_corpus()

"""
NLPC Configuration
Codec, RBF training and evaluation settings
"""

import math
import os
from dataclasses import dataclass, field
from typing import Dict, Optional, Tuple

from dotenv import load_dotenv

load_dotenv()


def _env_bool(name: str, default: str) -> bool:
    return os.getenv(name, default).strip().lower() in ("1", "true", "yes", "on")


# Jayant-style one-word-memory tables, indexed by code magnitude.
# Inner cells shrink the step, outer cells grow it.
JAYANT_TABLES: Dict[int, Tuple[float, ...]] = {
    2: (0.8, 1.6),
    3: (0.9, 0.9, 1.25, 1.75),
    4: (0.9, 0.9, 0.9, 0.9, 1.2, 1.6, 2.0, 2.4),
    5: (0.9,) * 10 + (1.2, 1.6, 2.0, 2.4, 2.8, 3.2),
}

# Quantizer range over mean reconstruction magnitude at equilibrium, per Nq
LOADING_FACTORS: Dict[int, float] = {2: 2.75, 3: 3.6, 4: 4.6, 5: 5.6}

SUPPORTED_NQ_BITS = (2, 3, 4, 5)

DEFAULT_SEED = 0x5EED


@dataclass
class CodecSettings:
    """ADPCM loop settings - values sized to the normalized [-1, 1] range"""
    nq_bits: int = int(os.getenv("NLPC_NQ_BITS", "4"))
    prediction_order: int = int(os.getenv("NLPC_ORDER", "10"))

    # Quantizer step
    initial_step: float = float(os.getenv("NLPC_INITIAL_STEP", "0.02"))
    step_min: float = float(os.getenv("NLPC_STEP_MIN", "1e-5"))
    step_max: float = float(os.getenv("NLPC_STEP_MAX", "1.0"))

    # Default multiplier tables: "loading" or "jayant"
    multiplier_tables: str = os.getenv("NLPC_MULTIPLIER_TABLES", "loading").strip().lower()
    adaptation_rate: float = float(os.getenv("NLPC_ADAPTATION_RATE", "0.2"))

    sample_rate_hz: int = 8000


@dataclass
class RbfSettings:
    """RBF predictor training settings"""
    neurons: int = int(os.getenv("NLPC_NEURONS", "20"))
    spread: float = float(os.getenv("NLPC_SPREAD", "0.22"))

    # RBF-2
    em_epochs: int = int(os.getenv("NLPC_EM_EPOCHS", "10"))
    kmeans_iters: int = int(os.getenv("NLPC_KMEANS_ITERS", "5"))

    # RBF-1
    goal_mse: float = float(os.getenv("NLPC_GOAL_MSE", "0.0"))
    max_training_vectors: int = int(os.getenv("NLPC_MAX_TRAINING_VECTORS", "1500"))

    output_bias: bool = _env_bool("NLPC_OUTPUT_BIAS", "true")


@dataclass
class EvalSettings:
    """SEGSNR evaluation settings"""
    frame_len: int = int(os.getenv("NLPC_FRAME_LEN", "160"))  # 20 ms at 8 kHz
    snr_clamp_db: float = 80.0
    energy_floor: float = 1e-10

    show_progress: bool = _env_bool("NLPC_PROGRESS", "true")
    csv_float_format: str = "%.6f"
    aggregate_label: str = "ALL"


@dataclass
class CorpusSettings:
    """Desk corpus synthesis settings"""
    sentences: int = 8
    duration_s: float = float(os.getenv("NLPC_SENTENCE_SECONDS", "1.0"))
    manifest_name: str = "manifest.txt"
    pitch_range: Tuple[int, int] = field(default=(40, 100))


# Global config instances
codec_settings = CodecSettings()
rbf_settings = RbfSettings()
eval_settings = EvalSettings()
corpus_settings = CorpusSettings()


def loading_table(nq_bits: int, loading: float, rate: float) -> Tuple[float, ...]:
    """
    Multipliers with log M(m) = rate * ((m + 0.5) * loading / levels - 1).

    The step settles where the mean reconstruction magnitude is range / loading,
    the same share of the range at every Nq, so an extra bit halves the step.
    """
    levels = 2 ** (nq_bits - 1)
    return tuple(math.exp(rate * ((m + 0.5) * loading / levels - 1.0)) for m in range(levels))


LOADING_TABLES: Dict[int, Tuple[float, ...]] = {
    nq: loading_table(nq, LOADING_FACTORS[nq], codec_settings.adaptation_rate) for nq in SUPPORTED_NQ_BITS
}

MULTIPLIER_TABLES = JAYANT_TABLES if codec_settings.multiplier_tables == "jayant" else LOADING_TABLES


def resolve_seed(flag_value: Optional[int] = None) -> int:
    """NLPC_SEED wins over the command-line value, which wins over the default."""
    env_seed = os.getenv("NLPC_SEED")
    if env_seed:
        return int(env_seed, 0)
    if flag_value is not None:
        return int(flag_value)
    return DEFAULT_SEED


def log_level() -> str:
    return os.getenv("NLPC_LOG_LEVEL", "INFO").upper()

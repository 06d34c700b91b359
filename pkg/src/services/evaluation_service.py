"""
Evaluation Service
SEGSNR experiments over a corpus: predictor/Nq grids and
one-axis parameter sweeps, exported as CSV
"""

import logging
import math
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd
from tqdm import tqdm

from ..audio.bitstream import Bitstream
from ..audio.signal_io import Signal
from ..codec.adpcm import CodecConfig, adpcm_encode
from ..config import DEFAULT_SEED, SUPPORTED_NQ_BITS, codec_settings, eval_settings
from ..dsp.segsnr import SegSnrReport, segsnr
from ..errors import ConfigurationError
from ..predictors.committee import AnyConfig, AnyPredictor, CommitteeConfig, fit_any
from ..predictors.predictor import PredictorConfig
from .corpus_service import Sentence

logger = logging.getLogger(__name__)

EVAL_COLUMNS = ["sentence", "predictor", "delta", "nq", "segsnr_mean_db", "segsnr_std_db"]
SWEEP_COLUMNS = ["axis_value", "segsnr_mean_db"]
SWEEP_AXES = ("spread", "neurons", "order", "none")


@dataclass(frozen=True)
class SweepRange:
    """Inclusive `start:stop:step` range evaluated as start + i*step."""
    start: float
    stop: float
    step: float

    def __post_init__(self):
        if not self.step > 0:
            raise ConfigurationError(f"Sweep step must be positive, got {self.step}")
        if self.stop < self.start:
            raise ConfigurationError(f"Empty sweep range {self.start}:{self.stop}")

    @classmethod
    def parse(cls, text: str) -> "SweepRange":
        parts = text.split(":")
        if len(parts) != 3:
            raise ConfigurationError(f"Range must be start:stop:step, got '{text}'")
        try:
            return cls(*(float(p) for p in parts))
        except ValueError as e:
            raise ConfigurationError(f"Bad range '{text}': {e}") from e

    def values(self) -> List[float]:
        count = int(math.floor((self.stop - self.start) / self.step + 1e-9)) + 1
        return [round(self.start + i * self.step, 12) for i in range(count)]


@dataclass(frozen=True)
class SweepPreset:
    predictor: PredictorConfig
    axis: str
    range: SweepRange
    nq_bits: int = 4


SWEEP_PRESETS: Dict[str, SweepPreset] = {
    "spread-s50": SweepPreset(PredictorConfig(kind="rbf1", neurons=50), "spread", SweepRange(0.011, 0.5, 0.01)),
    "neurons-rbf1": SweepPreset(PredictorConfig(kind="rbf1", spread=0.22), "neurons", SweepRange(5, 100, 5)),
    "spread-s20": SweepPreset(PredictorConfig(kind="rbf1", neurons=20), "spread", SweepRange(0.011, 1.2, 0.01)),
    "neurons-rbf2": SweepPreset(PredictorConfig(kind="rbf2", em_epochs=10), "neurons", SweepRange(5, 100, 5)),
    "order": SweepPreset(PredictorConfig(kind="lpc"), "order", SweepRange(1, 100, 1)),
}


@dataclass(frozen=True)
class ExperimentSpec:
    """One eval grid or one sweep over a corpus."""
    sentences: Tuple[Sentence, ...]
    predictors: Tuple[AnyConfig, ...]
    nq_list: Tuple[int, ...] = SUPPORTED_NQ_BITS
    delta_modes: Tuple[bool, ...] = (False,)
    axis: str = "none"
    sweep_range: Optional[SweepRange] = None
    output_csv: Optional[Path] = None
    seed: int = DEFAULT_SEED
    frame_len: int = field(default_factory=lambda: eval_settings.frame_len)
    codec: CodecConfig = field(default_factory=CodecConfig)

    def __post_init__(self):
        if not self.sentences:
            raise ConfigurationError("Experiment needs at least one sentence")
        if not self.predictors:
            raise ConfigurationError("Experiment needs at least one predictor")
        if not self.nq_list or any(nq not in SUPPORTED_NQ_BITS for nq in self.nq_list):
            raise ConfigurationError(f"nq list must be non-empty and within {SUPPORTED_NQ_BITS}")
        if self.axis not in SWEEP_AXES:
            raise ConfigurationError(f"Unknown sweep axis '{self.axis}', expected one of {SWEEP_AXES}")
        if self.axis != "none" and self.sweep_range is None:
            raise ConfigurationError(f"Sweep over '{self.axis}' needs a range")


class EvaluationService:
    """Service running SEGSNR experiments over sentences."""

    def __init__(self, show_progress: bool = None):
        self.show_progress = eval_settings.show_progress if show_progress is None else show_progress

    def _codec_config(self, spec: ExperimentSpec, nq: int, predictor: AnyConfig) -> CodecConfig:
        return replace(spec.codec, nq_bits=nq, prediction_order=predictor.order, predictor=predictor, seed=spec.seed)

    def encode_and_measure(
        self,
        signal: Signal,
        predictor: AnyPredictor,
        codec: CodecConfig,
        frame_len: int = None,
    ) -> Tuple[SegSnrReport, Bitstream, Signal]:
        bitstream, reconstructed = adpcm_encode(signal, predictor, codec)
        return segsnr(signal, reconstructed, frame_len), bitstream, reconstructed

    def evaluate_sentence(
        self,
        sentence: Sentence,
        config: AnyConfig,
        nq_list: Sequence[int],
        spec: ExperimentSpec,
    ) -> Dict[int, SegSnrReport]:
        """Train once on the clean sentence, then encode at every Nq."""
        predictor = fit_any(config, sentence.signal, spec.seed)
        reports = {}
        for nq in nq_list:
            report, _, _ = self.encode_and_measure(
                sentence.signal, predictor, self._codec_config(spec, nq, config), spec.frame_len
            )
            reports[nq] = report
            logger.debug(f"{sentence.name} {config.label} Nq={nq}: {report.mean_db:.2f} dB")
        return reports

    def run_eval(self, spec: ExperimentSpec) -> pd.DataFrame:
        """
        One row per (sentence, predictor, delta, nq) plus aggregate rows
        (sentence = ALL): mean of sentence means and their population std.
        """
        rows = []
        jobs = [
            (sentence, config.with_options(augmented=delta), delta)
            for config in spec.predictors
            for delta in spec.delta_modes
            for sentence in spec.sentences
        ]
        for sentence, config, delta in tqdm(jobs, desc="eval", disable=not self.show_progress):
            for nq, report in self.evaluate_sentence(sentence, config, spec.nq_list, spec).items():
                rows.append({
                    "sentence": sentence.name,
                    "predictor": config.label,
                    "delta": int(delta),
                    "nq": nq,
                    "segsnr_mean_db": report.mean_db,
                    "segsnr_std_db": report.std_db,
                })

        data = pd.DataFrame(rows, columns=EVAL_COLUMNS)
        data = data.sort_values(["sentence", "predictor", "delta", "nq"], kind="mergesort").reset_index(drop=True)
        table = pd.concat([data, self.aggregate(data)], ignore_index=True)

        if spec.output_csv is not None:
            self.write_csv(table, spec.output_csv)
        return table

    @staticmethod
    def aggregate(data: pd.DataFrame) -> pd.DataFrame:
        grouped = data.groupby(["predictor", "delta", "nq"], sort=True)["segsnr_mean_db"]
        summary = grouped.agg(
            segsnr_mean_db="mean",
            segsnr_std_db=lambda s: float(np.std(s.to_numpy())),
        ).reset_index()
        summary.insert(0, "sentence", eval_settings.aggregate_label)
        return summary[EVAL_COLUMNS]

    def run_sweep(self, spec: ExperimentSpec) -> pd.DataFrame:
        """
        Sweep one axis of the first predictor at the first Nq; each row is the
        corpus mean of sentence SEGSNR means.
        """
        if spec.axis == "none":
            raise ConfigurationError("Sweep needs an axis")
        base = spec.predictors[0]
        if isinstance(base, CommitteeConfig):
            raise ConfigurationError("Sweeps take a single predictor, not a committee")
        if spec.axis == "spread" and base.kind != "rbf1":
            raise ConfigurationError("Spread sweeps apply to rbf1 only")
        if spec.axis == "neurons" and base.kind == "lpc":
            raise ConfigurationError("Neuron sweeps apply to rbf1 and rbf2")

        nq = spec.nq_list[0]
        augmented = spec.delta_modes[0]
        rows = []
        for value in tqdm(spec.sweep_range.values(), desc=f"sweep {spec.axis}", disable=not self.show_progress):
            option = int(round(value)) if spec.axis in ("neurons", "order") else value
            config = base.with_options(augmented=augmented, **{spec.axis: option})
            means = [
                self.evaluate_sentence(sentence, config, (nq,), spec)[nq].mean_db
                for sentence in spec.sentences
            ]
            rows.append({"axis_value": value, "segsnr_mean_db": float(np.mean(means))})
            logger.info(f"{spec.axis}={value:g}: {rows[-1]['segsnr_mean_db']:.2f} dB")

        table = pd.DataFrame(rows, columns=SWEEP_COLUMNS).sort_values("axis_value", kind="mergesort")
        table = table.reset_index(drop=True)
        if spec.output_csv is not None:
            self.write_csv(table, spec.output_csv)
        return table

    def write_csv(self, table: pd.DataFrame, path: Union[str, Path]) -> None:
        path = Path(path)
        table.to_csv(path, index=False, float_format=eval_settings.csv_float_format, lineterminator="\n")
        logger.info(f"Wrote {len(table)} rows to {path}")


# Singleton instance
_evaluation_service: Optional[EvaluationService] = None


def get_evaluation_service() -> EvaluationService:
    """Get or create singleton EvaluationService instance."""
    global _evaluation_service
    if _evaluation_service is None:
        _evaluation_service = EvaluationService()
    return _evaluation_service

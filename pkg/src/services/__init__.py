"""
Services module for NLPC
Corpus access and SEGSNR experiments
"""

from .corpus_service import CorpusService, Sentence, get_corpus_service
from .evaluation_service import EvaluationService, ExperimentSpec, SweepRange, SWEEP_PRESETS, get_evaluation_service

__all__ = [
    'CorpusService',
    'Sentence',
    'get_corpus_service',
    'EvaluationService',
    'ExperimentSpec',
    'SweepRange',
    'SWEEP_PRESETS',
    'get_evaluation_service',
]

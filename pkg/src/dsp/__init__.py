"""
DSP core
Delta parameters, training pairs, LPC baseline and SEGSNR
"""

from .delta import TrainingSet, compute_delta, make_training_set, assemble_input, history_length
from .lpc import LpcModel, autocorrelation, levinson_durbin, fit_lpc_autocorrelation, fit_lpc_least_squares
from .segsnr import SegSnrReport, CorpusSnrSummary, segsnr, snr, aggregate_reports

__all__ = [
    'TrainingSet',
    'compute_delta',
    'make_training_set',
    'assemble_input',
    'history_length',
    'LpcModel',
    'autocorrelation',
    'levinson_durbin',
    'fit_lpc_autocorrelation',
    'fit_lpc_least_squares',
    'SegSnrReport',
    'CorpusSnrSummary',
    'segsnr',
    'snr',
    'aggregate_reports',
]

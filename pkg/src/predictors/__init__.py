"""
Predictors module
LPC / RBF predictors, delta augmentation and committees
"""

from .predictor import Predictor, PredictorConfig, predict, fit_predictor, parse_predictor_config
from .committee import (
    Committee,
    CommitteeConfig,
    committee_predict,
    fit_committee,
    fit_any,
    parse_predictor_spec,
    serialize_predictor,
    deserialize_predictor,
)

__all__ = [
    'Predictor',
    'PredictorConfig',
    'predict',
    'fit_predictor',
    'parse_predictor_config',
    'Committee',
    'CommitteeConfig',
    'committee_predict',
    'fit_committee',
    'fit_any',
    'parse_predictor_spec',
    'serialize_predictor',
    'deserialize_predictor',
]

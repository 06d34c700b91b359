"""
Codec module
Adaptive quantizer and the closed-loop ADPCM encoder/decoder
"""

from .quantizer import QuantizerState, quantize, dequantize
from .adpcm import CodecConfig, adpcm_encode, adpcm_decode

__all__ = [
    'QuantizerState',
    'quantize',
    'dequantize',
    'CodecConfig',
    'adpcm_encode',
    'adpcm_decode',
]

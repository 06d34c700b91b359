"""
Audio module
WAV signals and coded bitstreams
"""

from .signal_io import Signal, normalize, load_wav, save_wav
from .bitstream import Bitstream, CodecHeader, read_bitstream, write_bitstream

__all__ = [
    'Signal',
    'normalize',
    'load_wav',
    'save_wav',
    'Bitstream',
    'CodecHeader',
    'read_bitstream',
    'write_bitstream',
]

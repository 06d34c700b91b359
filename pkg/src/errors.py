"""
Exception hierarchy for the NLPC codec
"""


class NlpcError(Exception):
    """Base class for every codec error."""


# Signals and audio files

class SilentSignalError(NlpcError, ValueError):
    """Empty or all-zero input: no valid normalization gain exists."""


class WavFormatError(NlpcError):
    """WAV file is not 16-bit PCM mono."""


class SignalTooShortError(NlpcError, ValueError):
    """Signal holds too few samples for the requested prediction order."""


class DimensionMismatchError(NlpcError, ValueError):
    """Input vector or matrix has the wrong shape."""


class InsufficientHistoryError(NlpcError, ValueError):
    """Predictor called with fewer past samples than it consumes."""


class ConfigurationError(NlpcError, ValueError):
    """Invalid parameter value or predictor string."""


# Bitstreams and model payloads

class BitstreamError(NlpcError):
    """Malformed coded file."""


class BadMagicError(BitstreamError):
    pass


class VersionMismatchError(BitstreamError):
    pass


class TruncatedStreamError(BitstreamError):
    pass


class ModelFormatError(NlpcError):
    """Malformed serialized predictor."""


class UnknownModelTypeError(ModelFormatError):
    pass


class TruncatedModelError(ModelFormatError):
    pass


# Numerics

class NumericalError(NlpcError):
    """A numeric procedure could not produce a valid result."""


class InvalidAutocorrelationError(NumericalError, ValueError):
    """Autocorrelation sequence is not positive definite at the requested order."""


class NoRetainedFramesError(NumericalError, ValueError):
    """Every SEGSNR frame was skipped."""

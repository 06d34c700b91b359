"""
Coded bitstream format
Self-describing header (quantizer config, seed samples, predictor payload)
followed by the residual codes packed MSB-first.
"""

import logging
import struct
from dataclasses import dataclass, field
from pathlib import Path
from typing import Tuple, Union

import numpy as np

from ..config import SUPPORTED_NQ_BITS
from ..errors import (
    BadMagicError,
    BitstreamError,
    TruncatedStreamError,
    VersionMismatchError,
)

logger = logging.getLogger(__name__)

MAGIC = b"NLPC"
VERSION = 1

# magic, version, nq_bits, prediction_order, sample_rate, num_samples,
# gain, initial_step, step_min, step_max
_FIXED = struct.Struct("<4sBBHIQdddd")
_LENGTH = struct.Struct("<I")


@dataclass(frozen=True)
class CodecHeader:
    """Everything the decoder needs besides the codes."""
    nq_bits: int
    prediction_order: int
    num_samples: int
    gain: float
    initial_step: float
    step_min: float
    step_max: float
    multipliers: Tuple[float, ...]
    seed_samples: Tuple[float, ...]
    predictor_payload: bytes
    sample_rate_hz: int = 8000
    magic: bytes = MAGIC
    version: int = VERSION

    def __post_init__(self):
        if self.nq_bits not in SUPPORTED_NQ_BITS:
            raise BitstreamError(f"nq_bits must be one of {SUPPORTED_NQ_BITS}, got {self.nq_bits}")
        if self.prediction_order < 1:
            raise BitstreamError(f"prediction_order must be positive, got {self.prediction_order}")
        if self.num_samples < self.prediction_order:
            raise BitstreamError(
                f"num_samples ({self.num_samples}) is shorter than the seed ({self.prediction_order})"
            )
        if len(self.multipliers) != 2 ** (self.nq_bits - 1):
            raise BitstreamError(f"Multiplier table for Nq={self.nq_bits} needs {2 ** (self.nq_bits - 1)} entries")
        if len(self.seed_samples) != self.prediction_order:
            raise BitstreamError("seed_samples length must equal prediction_order")
        object.__setattr__(self, "multipliers", tuple(float(m) for m in self.multipliers))
        object.__setattr__(self, "seed_samples", tuple(float(s) for s in self.seed_samples))
        object.__setattr__(self, "predictor_payload", bytes(self.predictor_payload))

    @property
    def num_codes(self) -> int:
        return self.num_samples - self.prediction_order

    @property
    def code_bytes(self) -> int:
        return (self.num_codes * self.nq_bits + 7) // 8

    def to_bytes(self) -> bytes:
        parts = [
            _FIXED.pack(
                self.magic, self.version, self.nq_bits, self.prediction_order,
                self.sample_rate_hz, self.num_samples, self.gain,
                self.initial_step, self.step_min, self.step_max,
            ),
            struct.pack(f"<{len(self.multipliers)}d", *self.multipliers),
            struct.pack(f"<{len(self.seed_samples)}d", *self.seed_samples),
            _LENGTH.pack(len(self.predictor_payload)),
            self.predictor_payload,
        ]
        return b"".join(parts)

    @classmethod
    def from_bytes(cls, data: bytes) -> Tuple["CodecHeader", int]:
        """
        Parse a header from the start of `data`.

        Returns:
            (header, number of bytes consumed)
        """
        if len(data) < 4:
            raise TruncatedStreamError("File too short to hold a header")
        if data[:4] != MAGIC:
            raise BadMagicError(f"Bad magic {data[:4]!r}, expected {MAGIC!r}")
        if len(data) < _FIXED.size:
            raise TruncatedStreamError("Header truncated")

        (magic, version, nq_bits, order, rate, num_samples,
         gain, initial_step, step_min, step_max) = _FIXED.unpack_from(data, 0)
        if version != VERSION:
            raise VersionMismatchError(f"Unsupported bitstream version {version}, expected {VERSION}")
        if nq_bits not in SUPPORTED_NQ_BITS:
            raise BitstreamError(f"Invalid nq_bits {nq_bits} in header")

        offset = _FIXED.size
        levels = 2 ** (nq_bits - 1)
        need = offset + 8 * levels + 8 * order + _LENGTH.size
        if len(data) < need:
            raise TruncatedStreamError("Header truncated in multiplier table or seed samples")

        multipliers = struct.unpack_from(f"<{levels}d", data, offset)
        offset += 8 * levels
        seed = struct.unpack_from(f"<{order}d", data, offset)
        offset += 8 * order
        (payload_len,) = _LENGTH.unpack_from(data, offset)
        offset += _LENGTH.size
        if len(data) < offset + payload_len:
            raise TruncatedStreamError("Predictor payload truncated")
        payload = data[offset:offset + payload_len]
        offset += payload_len

        header = cls(
            nq_bits=nq_bits, prediction_order=order, num_samples=num_samples,
            gain=gain, initial_step=initial_step, step_min=step_min,
            step_max=step_max, multipliers=multipliers, seed_samples=seed,
            predictor_payload=payload, sample_rate_hz=rate,
            magic=magic, version=version,
        )
        return header, offset


@dataclass(frozen=True)
class Bitstream:
    """Header plus residual codes, one code per sample after the seed."""
    header: CodecHeader
    codes: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=np.uint8))

    def __post_init__(self):
        codes = np.asarray(self.codes, dtype=np.int64).ravel()
        if codes.size != self.header.num_codes:
            raise BitstreamError(
                f"Expected {self.header.num_codes} codes, got {codes.size}"
            )
        if codes.size and (codes.min() < 0 or codes.max() >= 2 ** self.header.nq_bits):
            raise BitstreamError(f"Codes must fit in {self.header.nq_bits} bits")
        codes = codes.astype(np.uint8)
        codes.setflags(write=False)
        object.__setattr__(self, "codes", codes)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Bitstream):
            return NotImplemented
        return self.header == other.header and np.array_equal(self.codes, other.codes)

    __hash__ = None

    def to_bytes(self) -> bytes:
        return self.header.to_bytes() + pack_codes(self.codes, self.header.nq_bits)

    @classmethod
    def from_bytes(cls, data: bytes) -> "Bitstream":
        header, offset = CodecHeader.from_bytes(data)
        body = data[offset:]
        if len(body) < header.code_bytes:
            raise TruncatedStreamError(
                f"Code region truncated: {len(body)} of {header.code_bytes} bytes"
            )
        if len(body) > header.code_bytes:
            raise BitstreamError(f"{len(body) - header.code_bytes} unexpected trailing bytes")
        codes = unpack_codes(body, header.nq_bits, header.num_codes)
        return cls(header=header, codes=codes)


def pack_codes(codes: np.ndarray, nq_bits: int) -> bytes:
    """Pack codes MSB-first, nq_bits each, zero-padded to a byte boundary."""
    codes = np.asarray(codes, dtype=np.uint8).ravel()
    if codes.size == 0:
        return b""
    shifts = np.arange(nq_bits - 1, -1, -1, dtype=np.uint8)
    bits = (codes[:, None] >> shifts) & 1
    return np.packbits(bits.ravel().astype(np.uint8)).tobytes()


def unpack_codes(data: bytes, nq_bits: int, count: int) -> np.ndarray:
    """Inverse of pack_codes."""
    if count == 0:
        return np.zeros(0, dtype=np.uint8)
    bits = np.unpackbits(np.frombuffer(data, dtype=np.uint8))[: count * nq_bits]
    weights = (1 << np.arange(nq_bits - 1, -1, -1)).astype(np.int64)
    return (bits.reshape(count, nq_bits).astype(np.int64) @ weights).astype(np.uint8)


def write_bitstream(path: Union[str, Path], bitstream: Bitstream) -> None:
    path = Path(path)
    data = bitstream.to_bytes()
    path.write_bytes(data)
    logger.info(f"Wrote {len(data)} bytes ({bitstream.header.num_codes} codes) to {path}")


def read_bitstream(path: Union[str, Path]) -> Bitstream:
    path = Path(path)
    bitstream = Bitstream.from_bytes(path.read_bytes())
    logger.debug(f"Read {bitstream.header.num_codes} codes from {path}")
    return bitstream

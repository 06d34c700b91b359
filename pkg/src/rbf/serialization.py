"""
Predictor model byte format

    tag u8 (1 = LPC, 2 = RBF)
    LPC: order u16, coefficients f64[order]
    RBF: S u16, D u16, centers f64[S*D] row-major, biases f64[S],
         out_weights f64[S], out_bias f64

All little-endian.
"""

import struct
from typing import Union

import numpy as np

from ..dsp.lpc import LpcModel
from ..errors import (
    ConfigurationError,
    DimensionMismatchError,
    ModelFormatError,
    TruncatedModelError,
    UnknownModelTypeError,
)
from .network import RbfNetwork

TAG_LPC = 1
TAG_RBF = 2

_F64 = np.dtype("<f8")

Model = Union[LpcModel, RbfNetwork]


def model_serialize(model: Model) -> bytes:
    if isinstance(model, LpcModel):
        return struct.pack("<BH", TAG_LPC, model.order) + model.coefficients.astype(_F64).tobytes()
    if isinstance(model, RbfNetwork):
        s, d = model.centers.shape
        return b"".join((
            struct.pack("<BHH", TAG_RBF, s, d),
            model.centers.astype(_F64).tobytes(order="C"),
            model.biases.astype(_F64).tobytes(),
            model.out_weights.astype(_F64).tobytes(),
            struct.pack("<d", model.out_bias),
        ))
    raise UnknownModelTypeError(f"Cannot serialize {type(model).__name__}")


def _read_f64(data: bytes, offset: int, count: int) -> np.ndarray:
    end = offset + 8 * count
    if end > len(data):
        raise TruncatedModelError(f"Model payload truncated: need {end} bytes, have {len(data)}")
    return np.frombuffer(data, dtype=_F64, count=count, offset=offset).astype(np.float64)


def model_deserialize(data: bytes) -> Model:
    data = bytes(data)
    if not data:
        raise TruncatedModelError("Empty model payload")

    tag = data[0]
    if tag == TAG_LPC:
        if len(data) < 3:
            raise TruncatedModelError("LPC header truncated")
        (order,) = struct.unpack_from("<H", data, 1)
        coefficients = _read_f64(data, 3, order)
        consumed = 3 + 8 * order
        if order == 0:
            raise ModelFormatError("LPC payload with order 0")
        model = LpcModel(coefficients=coefficients)
    elif tag == TAG_RBF:
        if len(data) < 5:
            raise TruncatedModelError("RBF header truncated")
        s, d = struct.unpack_from("<HH", data, 1)
        offset = 5
        centers = _read_f64(data, offset, s * d).reshape(s, d)
        offset += 8 * s * d
        biases = _read_f64(data, offset, s)
        offset += 8 * s
        out_weights = _read_f64(data, offset, s)
        offset += 8 * s
        (out_bias,) = _read_f64(data, offset, 1)
        consumed = offset + 8
        try:
            model = RbfNetwork(centers=centers, biases=biases, out_weights=out_weights, out_bias=out_bias)
        except (DimensionMismatchError, ConfigurationError) as e:
            raise ModelFormatError(f"Invalid RBF payload: {e}") from e
    else:
        raise UnknownModelTypeError(f"Unknown model type tag {tag}")

    if consumed != len(data):
        raise ModelFormatError(f"{len(data) - consumed} unexpected trailing bytes in model payload")
    return model

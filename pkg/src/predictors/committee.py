"""
Committee of predictors and the predictor payload carried in bitstreams
"""

import logging
import math
import struct
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Tuple, Union

import numpy as np

from ..audio.signal_io import Signal
from ..errors import ConfigurationError, InsufficientHistoryError, ModelFormatError, TruncatedModelError
from ..rbf.serialization import model_deserialize, model_serialize
from .predictor import Predictor, PredictorConfig, clamp_unit, fit_predictor, parse_predictor_config

logger = logging.getLogger(__name__)

KIND_SINGLE = 0
KIND_COMMITTEE = 1

_MEMBER = struct.Struct("<BHI")


@dataclass(frozen=True)
class Committee:
    """Members combined by the arithmetic mean of their predictions."""
    members: Tuple[Predictor, ...]

    def __post_init__(self):
        members = tuple(self.members)
        if not members:
            raise ConfigurationError("A committee needs at least one member")
        object.__setattr__(self, "members", members)

    @property
    def order(self) -> int:
        return max(m.order for m in self.members)

    @property
    def history_length(self) -> int:
        return max(m.history_length for m in self.members)

    def predict(self, history: np.ndarray) -> float:
        return committee_predict(self, history)


def committee_predict(c: Committee, history: np.ndarray) -> float:
    """Mean of member predictions, clamped to [-1, 1]. Order of members is irrelevant."""
    history = np.asarray(history, dtype=np.float64)
    if history.size < c.history_length:
        raise InsufficientHistoryError(f"Committee needs {c.history_length} past samples, got {history.size}")
    predictions = [m.predict(history) for m in c.members]
    return clamp_unit(math.fsum(predictions) / len(predictions))


@dataclass(frozen=True)
class CommitteeConfig:
    members: Tuple[PredictorConfig, ...]

    def __post_init__(self):
        members = tuple(self.members)
        if not members:
            raise ConfigurationError("A committee needs at least one member")
        object.__setattr__(self, "members", members)

    @property
    def augmented(self) -> bool:
        return any(m.augmented for m in self.members)

    @property
    def order(self) -> int:
        return max(m.order for m in self.members)

    @property
    def history_length(self) -> int:
        return max(m.history_length for m in self.members)

    @property
    def label(self) -> str:
        return "+".join(m.label for m in self.members)

    def with_options(self, **options) -> "CommitteeConfig":
        return CommitteeConfig(members=tuple(replace(m, **options) for m in self.members))


AnyPredictor = Union[Predictor, Committee]
AnyConfig = Union[PredictorConfig, CommitteeConfig]


def fit_committee(config: CommitteeConfig, signal: Signal, seed: int = 0) -> Committee:
    """Member i is trained with seed + i, so repeated kinds end up different."""
    members = tuple(fit_predictor(member, signal, seed + i) for i, member in enumerate(config.members))
    logger.info(f"Committee {config.label}: {len(members)} members")
    return Committee(members=members)


def fit_any(config: AnyConfig, signal: Signal, seed: int = 0) -> AnyPredictor:
    if isinstance(config, CommitteeConfig):
        return fit_committee(config, signal, seed)
    return fit_predictor(config, signal, seed)


def parse_predictor_spec(text: str, **defaults) -> AnyConfig:
    """`rbf1:spread=0.22` -> PredictorConfig; `rbf1:spread=0.22+rbf2` -> CommitteeConfig."""
    parts = [p for p in (s.strip() for s in text.split("+")) if p]
    if not parts:
        raise ConfigurationError(f"Empty predictor string '{text}'")
    configs = tuple(parse_predictor_config(p, **defaults) for p in parts)
    if len(configs) == 1:
        return configs[0]
    return CommitteeConfig(members=configs)


def serialize_predictor(predictor: AnyPredictor) -> bytes:
    """
    kind u8 (0 single, 1 committee), member count u8, then per member:
    augmented u8, order u16, model length u32, model bytes.
    """
    is_committee = isinstance(predictor, Committee)
    members = predictor.members if is_committee else (predictor,)
    if len(members) > 255:
        raise ConfigurationError("At most 255 committee members can be serialized")
    parts = [struct.pack("<BB", KIND_COMMITTEE if is_committee else KIND_SINGLE, len(members))]
    for member in members:
        model_bytes = model_serialize(member.model)
        parts.append(_MEMBER.pack(int(member.augmented), member.order, len(model_bytes)))
        parts.append(model_bytes)
    return b"".join(parts)


def deserialize_predictor(data: bytes) -> AnyPredictor:
    data = bytes(data)
    if len(data) < 2:
        raise TruncatedModelError("Predictor payload truncated")
    kind, count = struct.unpack_from("<BB", data, 0)
    if kind not in (KIND_SINGLE, KIND_COMMITTEE):
        raise ModelFormatError(f"Unknown predictor payload kind {kind}")
    if count < 1 or (kind == KIND_SINGLE and count != 1):
        raise ModelFormatError(f"Invalid member count {count}")

    offset = 2
    members = []
    for _ in range(count):
        if len(data) < offset + _MEMBER.size:
            raise TruncatedModelError("Predictor member header truncated")
        augmented, order, length = _MEMBER.unpack_from(data, offset)
        offset += _MEMBER.size
        if len(data) < offset + length:
            raise TruncatedModelError("Predictor member model truncated")
        model = model_deserialize(data[offset:offset + length])
        offset += length
        try:
            members.append(Predictor(model=model, order=order, augmented=bool(augmented)))
        except ValueError as e:
            raise ModelFormatError(f"Inconsistent predictor member: {e}") from e

    if offset != len(data):
        raise ModelFormatError(f"{len(data) - offset} unexpected trailing bytes in predictor payload")
    if kind == KIND_SINGLE:
        return members[0]
    return Committee(members=tuple(members))


MODEL_FILE_MAGIC = b"NLPM"
MODEL_FILE_VERSION = 1


def write_model_file(path, predictor: AnyPredictor) -> None:
    """Stand-alone predictor file: magic, version u8, predictor payload."""
    path = Path(path)
    path.write_bytes(MODEL_FILE_MAGIC + bytes([MODEL_FILE_VERSION]) + serialize_predictor(predictor))
    logger.info(f"Wrote predictor model to {path}")


def read_model_file(path) -> AnyPredictor:
    data = Path(path).read_bytes()
    if data[:4] != MODEL_FILE_MAGIC:
        raise ModelFormatError(f"{path}: not a predictor model file")
    if len(data) < 5:
        raise TruncatedModelError(f"{path}: model file truncated")
    if data[4] != MODEL_FILE_VERSION:
        raise ModelFormatError(f"{path}: unsupported model file version {data[4]}")
    return deserialize_predictor(data[5:])

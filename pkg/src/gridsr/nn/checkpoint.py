"""Binary model checkpoints.

Layout (little-endian): magic b"GSRW", u32 version, u32 record count, then
one record per layer: u32 kind tag, u32 scalar count + f64 scalars, u32
array count, and per array u32 ndim, u32 dims, f64 data in C order.
Serialization is a pure function of the records, so round trips are
byte-exact.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

CHECKPOINT_MAGIC = b"GSRW"
CHECKPOINT_VERSION = 1

TAG_MODEL_KIND = 0
TAG_DENSE = 1
TAG_CONV = 2
TAG_COMPLEX_DENSE = 3
TAG_RELU = 4
TAG_SINE = 5
TAG_GAUSS = 6
TAG_GABOR = 7
TAG_NORM_STATS = 8

MODEL_SRCNN = 1
MODEL_DISCRIMINATOR = 2
MODEL_INR = 3


class CheckpointError(ValueError):
    """Raised when checkpoint bytes do not conform to the GSRW layout."""


@dataclass
class Record:
    tag: int
    scalars: tuple[float, ...] = ()
    arrays: tuple[np.ndarray, ...] = field(default_factory=tuple)


def _pack_u32(*vals: int) -> bytes:
    return struct.pack(f"<{len(vals)}I", *vals)


def encode_records(records: list[Record]) -> bytes:
    out = [CHECKPOINT_MAGIC, _pack_u32(CHECKPOINT_VERSION, len(records))]
    for rec in records:
        out.append(_pack_u32(rec.tag, len(rec.scalars)))
        out.append(struct.pack(f"<{len(rec.scalars)}d", *rec.scalars))
        out.append(_pack_u32(len(rec.arrays)))
        for arr in rec.arrays:
            a = np.ascontiguousarray(arr, dtype=np.float64)
            out.append(_pack_u32(a.ndim, *a.shape))
            out.append(a.astype("<f8").tobytes())
    return b"".join(out)


class _Reader:
    def __init__(self, data: bytes):
        self.data = data
        self.pos = 0

    def take(self, n: int) -> bytes:
        if self.pos + n > len(self.data):
            raise CheckpointError("truncated checkpoint")
        chunk = self.data[self.pos : self.pos + n]
        self.pos += n
        return chunk

    def u32(self) -> int:
        return struct.unpack("<I", self.take(4))[0]


def decode_records(data: bytes) -> list[Record]:
    r = _Reader(data)
    if r.take(4) != CHECKPOINT_MAGIC:
        raise CheckpointError(f"bad checkpoint magic, expected {CHECKPOINT_MAGIC!r}")
    version = r.u32()
    if version != CHECKPOINT_VERSION:
        raise CheckpointError(f"unsupported checkpoint version {version}")
    records = []
    for _ in range(r.u32()):
        tag = r.u32()
        n_scalars = r.u32()
        scalars = struct.unpack(f"<{n_scalars}d", r.take(8 * n_scalars))
        arrays = []
        for _ in range(r.u32()):
            ndim = r.u32()
            shape = tuple(r.u32() for _ in range(ndim))
            count = int(np.prod(shape, dtype=np.int64)) if shape else 1
            arr = np.frombuffer(r.take(8 * count), dtype="<f8").astype(np.float64)
            arrays.append(arr.reshape(shape))
        records.append(Record(tag, scalars, tuple(arrays)))
    if r.pos != len(data):
        raise CheckpointError(f"{len(data) - r.pos} trailing bytes after records")
    return records


def save_records(path: str | Path, records: list[Record]) -> None:
    Path(path).write_bytes(encode_records(records))


def load_records(path: str | Path) -> list[Record]:
    return decode_records(Path(path).read_bytes())


def model_kind(records: list[Record]) -> int:
    if not records or records[0].tag != TAG_MODEL_KIND or not records[0].scalars:
        raise CheckpointError("checkpoint does not start with a model-kind record")
    return int(records[0].scalars[0])

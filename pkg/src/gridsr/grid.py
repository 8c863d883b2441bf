"""Single-channel gridded fields and their on-disk format.

A field is a dense 2-D array of real values on a lat/lon grid, row 0 being
the northernmost latitude. Files use the little-endian "GSR1" layout:

    bytes 0-3   magic b"GSR1"
    u32         height
    u32         width
    u32         name_len
    name_len    UTF-8 var_name
    h*w*4       float32 values, row-major

Values are stored as float32 on disk and promoted to float64 in memory.
"""

from __future__ import annotations

import math
import struct
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable

import numpy as np

GRID_MAGIC = b"GSR1"
_HEADER = struct.Struct("<4sIII")


class GridFormatError(ValueError):
    """Raised when a grid file does not conform to the GSR1 layout."""


@dataclass(frozen=True, eq=False)
class GridField:
    """Immutable 2-D field; ``values[0, :]`` is the northernmost row."""

    values: np.ndarray
    var_name: str = ""
    units: str = ""

    def __post_init__(self) -> None:
        vals = np.array(self.values, dtype=np.float64)
        if vals.ndim != 2:
            raise ValueError(f"field values must be 2-D, got shape {vals.shape}")
        if vals.shape[0] < 1 or vals.shape[1] < 1:
            raise ValueError(f"field dimensions must be positive, got {vals.shape}")
        if not np.isfinite(vals).all():
            raise ValueError("field contains non-finite values")
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    @property
    def height(self) -> int:
        return self.values.shape[0]

    @property
    def width(self) -> int:
        return self.values.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self.values.shape

    def with_values(self, values: np.ndarray) -> "GridField":
        """New field with the same labels but different values."""
        return GridField(values, var_name=self.var_name, units=self.units)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GridField):
            return NotImplemented
        return (
            self.var_name == other.var_name
            and self.units == other.units
            and self.shape == other.shape
            and np.array_equal(self.values, other.values)
        )


@dataclass(frozen=True)
class NormStats:
    """Min/max statistics used for [0, 1] scaling; min must be strictly below max."""

    min_val: float
    max_val: float

    def __post_init__(self) -> None:
        if not (self.min_val < self.max_val):
            raise ValueError(
                f"degenerate normalization stats: min {self.min_val} >= max {self.max_val}"
            )


def stats_of(fields: Iterable[GridField]) -> NormStats:
    """Min/max over a collection of fields (typically the training split)."""
    lo = math.inf
    hi = -math.inf
    for f in fields:
        lo = min(lo, float(f.values.min()))
        hi = max(hi, float(f.values.max()))
    if not (lo < hi):
        raise ValueError("cannot compute stats: values are constant or no fields given")
    return NormStats(lo, hi)


def normalize(field: GridField, stats: NormStats) -> GridField:
    span = stats.max_val - stats.min_val
    return field.with_values((field.values - stats.min_val) / span)


def denormalize(field: GridField, stats: NormStats) -> GridField:
    span = stats.max_val - stats.min_val
    return field.with_values(field.values * span + stats.min_val)


def save_grid(field: GridField, path: str | Path) -> None:
    """Write a field in GSR1 layout (float32 payload)."""
    name = field.var_name.encode("utf-8")
    header = _HEADER.pack(GRID_MAGIC, field.height, field.width, len(name))
    payload = field.values.astype("<f4").tobytes()
    Path(path).write_bytes(header + name + payload)


def load_grid(path: str | Path) -> GridField:
    """Read a GSR1 file, reporting bad magic, truncation and non-finite values distinctly."""
    data = Path(path).read_bytes()
    if len(data) < _HEADER.size:
        raise GridFormatError(f"{path}: truncated header ({len(data)} bytes)")
    magic, height, width, name_len = _HEADER.unpack_from(data)
    if magic != GRID_MAGIC:
        raise GridFormatError(f"{path}: bad magic {magic!r}, expected {GRID_MAGIC!r}")
    offset = _HEADER.size
    if len(data) < offset + name_len:
        raise GridFormatError(f"{path}: truncated var_name block")
    var_name = data[offset : offset + name_len].decode("utf-8")
    offset += name_len
    expected = height * width * 4
    payload = data[offset:]
    if len(payload) < expected:
        raise GridFormatError(
            f"{path}: truncated payload, expected {expected} bytes, got {len(payload)}"
        )
    if len(payload) > expected:
        raise GridFormatError(f"{path}: {len(payload) - expected} trailing bytes after payload")
    values = np.frombuffer(payload, dtype="<f4").astype(np.float64).reshape(height, width)
    if not np.isfinite(values).all():
        raise GridFormatError(f"{path}: payload contains non-finite values")
    return GridField(values, var_name=var_name)


def render_heatmap(field: GridField, path: str | Path) -> None:
    """Write an 8-bit grayscale binary PGM; min-max scaled, constant fields mid-gray."""
    v = field.values
    lo = float(v.min())
    hi = float(v.max())
    if hi > lo:
        pixels = np.rint((v - lo) * (255.0 / (hi - lo))).astype(np.uint8)
    else:
        pixels = np.full(v.shape, 128, dtype=np.uint8)
    header = f"P5\n{field.width} {field.height}\n255\n".encode("ascii")
    Path(path).write_bytes(header + pixels.tobytes())

"""Embedding matrices and their on-disk container.

Layout (all little-endian)::

    offset  size  field
    0       4     magic  b"TEXO"
    4       4     version (u32) = 1
    8       1     dtype (u8)    = 1  -> float32
    9       1     ndim (u8)     = 2
    10      8     rows (u64)
    18      8     dim (u64)
    26      ...   rows * dim float32, row-major
"""

from __future__ import annotations

import os
import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np

MAGIC = b"TEXO"
VERSION = 1
DTYPE_F32 = 1
HEADER = struct.Struct("<4sIBBQQ")
HEADER_SIZE = HEADER.size  # 26


class TensorFormatError(ValueError):
    pass


class BadMagicError(TensorFormatError):
    pass


class UnsupportedFormatError(TensorFormatError):
    pass


class TruncatedPayloadError(TensorFormatError):
    pass


class NonFiniteError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class EmbeddingMatrix:
    """A ``rows x dim`` float32 table, one row per vocabulary entry."""

    data: np.ndarray

    def __post_init__(self):
        arr = np.ascontiguousarray(self.data, dtype="<f4")
        if arr.ndim != 2:
            raise ValueError(f"embedding matrix must be 2-D, got shape {arr.shape}")
        if not np.isfinite(arr).all():
            raise NonFiniteError("embedding matrix contains NaN or Inf")
        arr.setflags(write=False)
        object.__setattr__(self, "data", arr)

    @property
    def rows(self) -> int:
        return self.data.shape[0]

    @property
    def dim(self) -> int:
        return self.data.shape[1]

    def __eq__(self, other):
        if not isinstance(other, EmbeddingMatrix):
            return NotImplemented
        return self.data.shape == other.data.shape and self.data.tobytes() == other.data.tobytes()


def to_bytes(m: EmbeddingMatrix) -> bytes:
    return HEADER.pack(MAGIC, VERSION, DTYPE_F32, 2, m.rows, m.dim) + m.data.tobytes()


def from_bytes(buf: bytes) -> EmbeddingMatrix:
    if len(buf) < HEADER_SIZE:
        raise TruncatedPayloadError(f"header needs {HEADER_SIZE} bytes, got {len(buf)}")
    magic, version, dtype, ndim, rows, dim = HEADER.unpack_from(buf)
    if magic != MAGIC:
        raise BadMagicError(f"bad magic {magic!r}, expected {MAGIC!r}")
    if version != VERSION:
        raise UnsupportedFormatError(f"unsupported version {version}")
    if dtype != DTYPE_F32:
        raise UnsupportedFormatError(f"unsupported dtype code {dtype}")
    if ndim != 2:
        raise UnsupportedFormatError(f"unsupported ndim {ndim}")
    expected = rows * dim * 4
    actual = len(buf) - HEADER_SIZE
    if actual != expected:
        raise TruncatedPayloadError(f"payload is {actual} bytes, expected {expected}")
    data = np.frombuffer(buf, dtype="<f4", offset=HEADER_SIZE).reshape(rows, dim)
    return EmbeddingMatrix(data)


def write_tensor(path: str | Path, m: EmbeddingMatrix) -> None:
    path = Path(path)
    tmp = path.with_name(path.name + ".tmp")
    with open(tmp, "wb") as f:
        f.write(to_bytes(m))
    os.replace(tmp, path)


def read_tensor(path: str | Path) -> EmbeddingMatrix:
    return from_bytes(Path(path).read_bytes())

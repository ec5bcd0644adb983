"""
Binary tensor container (``.htns``).

Layout, all integers little-endian::

    offset  size      field
    0       4         magic b"HTNS"
    4       1         version (1)
    5       1         ndim, 1..255
    6       8*ndim    extents, uint64
    ...     16*prod   payload, interleaved (re, im) float64, row-major
"""
from __future__ import annotations

import os

import numpy as np

from .errors import ParseError

MAGIC = b"HTNS"
VERSION = 1
_HEADER = 6

__all__ = ["MAGIC", "VERSION", "dumps", "loads", "write_tensor", "read_tensor"]


def dumps(t) -> bytes:
    t = np.asarray(t)
    if t.ndim < 1 or t.ndim > 255:
        raise ValueError(f"ndim must be in 1..255, got {t.ndim}")
    header = MAGIC + bytes([VERSION, t.ndim]) + np.asarray(t.shape, dtype="<u8").tobytes()
    return header + np.ascontiguousarray(t, dtype="<c16").tobytes()


def loads(buf: bytes) -> np.ndarray:
    if len(buf) < _HEADER:
        raise ParseError(f"truncated header: {len(buf)} bytes", offset=len(buf))
    if buf[:4] != MAGIC:
        raise ParseError(f"bad magic {bytes(buf[:4])!r}", offset=0)
    if buf[4] != VERSION:
        raise ParseError(f"unsupported version {buf[4]}", offset=4)
    ndim = buf[5]
    if ndim == 0:
        raise ParseError("ndim must be at least 1", offset=5)
    end = _HEADER + 8 * ndim
    if len(buf) < end:
        raise ParseError(f"truncated extents: need {end} bytes, have {len(buf)}", offset=len(buf))
    dims = tuple(int(n) for n in np.frombuffer(buf, dtype="<u8", count=ndim, offset=_HEADER))
    for i, n in enumerate(dims):
        if n == 0:
            raise ParseError(f"extent {i} is zero", offset=_HEADER + 8 * i)
    expected = 16 * int(np.prod(dims, dtype=object))
    have = len(buf) - end
    if have != expected:
        raise ParseError(f"payload is {have} bytes, expected {expected} for dims {dims}",
                         offset=end + min(have, expected))
    data = np.frombuffer(buf, dtype="<c16", offset=end).reshape(dims)
    return data.astype(np.complex128)


def write_tensor(path, t) -> None:
    with open(path, "wb") as fh:
        fh.write(dumps(t))


def read_tensor(path) -> np.ndarray:
    with open(os.fspath(path), "rb") as fh:
        return loads(fh.read())

"""Binary frames of per-trial eigenvalues.

A frame is ``uint64 length`` followed by ``length`` little-endian float64
values: ``trial_index, N, Re z_1, Im z_1, ..., Re z_N, Im z_N``.
"""

from __future__ import annotations

import struct
from typing import BinaryIO, Iterator

import numpy as np

from ..errors import DomainError

_LEN = struct.Struct("<Q")


def encode_frame(trial: int, eigenvalues) -> bytes:
    z = np.asarray(eigenvalues, dtype=complex).ravel()
    body = np.empty(2 + 2 * z.size, dtype="<f8")
    body[0] = trial
    body[1] = z.size
    body[2::2] = z.real
    body[3::2] = z.imag
    return _LEN.pack(body.size) + body.tobytes()


def write_frame(fh: BinaryIO, trial: int, eigenvalues) -> None:
    fh.write(encode_frame(trial, eigenvalues))


def read_frames(fh: BinaryIO) -> Iterator[tuple[int, np.ndarray]]:
    """Yield ``(trial, eigenvalues)`` until end of file."""
    while True:
        head = fh.read(_LEN.size)
        if not head:
            return
        if len(head) != _LEN.size:
            raise DomainError("truncated frame header")
        (count,) = _LEN.unpack(head)
        raw = fh.read(8 * count)
        if len(raw) != 8 * count:
            raise DomainError("truncated frame body")
        body = np.frombuffer(raw, dtype="<f8")
        n = int(body[1])
        if count != 2 + 2 * n:
            raise DomainError(f"frame length {count} does not match N={n}")
        yield int(body[0]), body[2::2] + 1j * body[3::2]


__all__ = ["encode_frame", "write_frame", "read_frames"]

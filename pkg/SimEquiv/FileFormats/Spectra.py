"""Spectra file: b"PWSP", u32 version, u32 ndim, ndim x u32 dims, then complex128 samples

All integers and samples are little-endian; samples are (re, im) pairs in
row-major order of the dims. Joint spectra are stored [ky, kx, w_phi, w_rho],
filter spectra [w_phi, w_rho, w_theta, w_r].
"""
import struct
from pathlib import Path

import numpy as np

from FileFormats.Atomic import atomic_write
from utils.errors import SimEquivError

MAGIC = b"PWSP"
VERSION = 1


def encode_spectrum(values: np.ndarray) -> bytes:
    values = np.ascontiguousarray(values, dtype="<c16")
    header = MAGIC + struct.pack(f"<II{values.ndim}I", VERSION, values.ndim, *values.shape)
    return header + values.tobytes(order="C")


def decode_spectrum(payload: bytes) -> np.ndarray:
    if payload[:4] != MAGIC:
        raise SimEquivError("not a spectra file", {"magic": payload[:4].hex()})
    version, ndim = struct.unpack_from("<II", payload, 4)
    if version != VERSION:
        raise SimEquivError(f"unsupported spectra version {version}", {"version": version})
    dims = struct.unpack_from(f"<{ndim}I", payload, 12)
    offset = 12 + 4 * ndim
    expected = int(np.prod(dims)) * 16
    if len(payload) - offset != expected:
        raise SimEquivError("spectra file is truncated",
                            {"expected_bytes": expected, "found_bytes": len(payload) - offset})
    return np.frombuffer(payload, dtype="<c16", offset=offset).reshape(dims).astype(complex)


def write_spectrum(path, values: np.ndarray) -> Path:
    return atomic_write(path, encode_spectrum(values))


def read_spectrum(path) -> np.ndarray:
    return decode_spectrum(Path(path).read_bytes())

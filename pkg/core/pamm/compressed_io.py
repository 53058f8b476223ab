"""The "PAMC" compressed-activation file format."""

import math

import numpy as np
from bitstring import ConstBitStream

from core.binary_readers import (
    byte_position,
    pack_float64,
    pack_uint16,
    pack_uint64,
    read_floatle64,
    read_magic,
    read_uintle16,
    read_uintle64,
    remaining_bytes,
)
from core.file import atomic_write_bytes
from core.linalg import FormatError
from .types import INFINITY, CompressedActivation

COMPRESSED_MAGIC = b"PAMC"
COMPRESSED_FORMAT_VERSION = 1
# magic + version + b, n, k, eta + epsilon + beta + seed
COMPRESSED_HEADER_SIZE = 4 + 2 + 4 * 8 + 8 + 8 + 8

_REAL = np.dtype("<f4")
_INDEX = np.dtype("<u4")

def encode_compressed(comp: CompressedActivation) -> bytes:
    """
    Serialize a compressed activation.

    Generators and coefficients are stored in 32-bit precision. NaN encodes an infinite
    epsilon and an undefined beta.
    """
    epsilon = math.nan if math.isinf(comp.epsilon) else comp.epsilon
    beta = math.nan if comp.beta is None else comp.beta

    header = (COMPRESSED_MAGIC
              + pack_uint16(COMPRESSED_FORMAT_VERSION)
              + pack_uint64(comp.b)
              + pack_uint64(comp.n)
              + pack_uint64(comp.k)
              + pack_uint64(comp.eta)
              + pack_float64(epsilon)
              + pack_float64(beta)
              + pack_uint64(comp.seed))
    return (header
            + comp.generators.astype(_REAL).tobytes(order="C")
            + comp.alpha.astype(_REAL).tobytes()
            + comp.assignments.astype(_INDEX).tobytes())

def decode_compressed(data: bytes) -> CompressedActivation:
    """
    Parse a compressed activation file.

    :raises FormatError: On bad magic, unknown version, inconsistent sizes or indices.
    """
    if len(data) < COMPRESSED_HEADER_SIZE:
        raise FormatError("Truncated compressed-activation header")

    stream = ConstBitStream(bytes=data)
    magic = read_magic(stream)
    if magic != COMPRESSED_MAGIC:
        raise FormatError(f"Not a compressed-activation file (magic {magic!r})")

    version = read_uintle16(stream)
    if version != COMPRESSED_FORMAT_VERSION:
        raise FormatError(f"Unsupported compressed-activation version {version}")

    b = read_uintle64(stream)
    n = read_uintle64(stream)
    k = read_uintle64(stream)
    eta = read_uintle64(stream)
    epsilon = read_floatle64(stream)
    beta = read_floatle64(stream)
    seed = read_uintle64(stream)

    if not (b >= 1 and n >= 1 and 1 <= k <= b and eta <= b):
        raise FormatError(f"Inconsistent sizes b={b} n={n} k={k} eta={eta}")

    expected = k * n * _REAL.itemsize + b * _REAL.itemsize + b * _INDEX.itemsize
    if remaining_bytes(stream) != expected:
        raise FormatError(f"Payload is {remaining_bytes(stream)} bytes, expected {expected}")

    offset = byte_position(stream)
    generators = np.frombuffer(data, dtype=_REAL, count=k * n, offset=offset)
    offset += k * n * _REAL.itemsize
    alpha = np.frombuffer(data, dtype=_REAL, count=b, offset=offset)
    offset += b * _REAL.itemsize
    assignments = np.frombuffer(data, dtype=_INDEX, count=b, offset=offset)

    if assignments.size and assignments.max() >= k:
        raise FormatError("Assignment index out of range")

    return CompressedActivation(
        generators=generators.reshape(k, n).astype(np.float32),
        assignments=assignments.astype(np.int64),
        alpha=alpha.astype(np.float32),
        beta=None if math.isnan(beta) else beta,
        b=b,
        n=n,
        k=k,
        eta=eta,
        epsilon=INFINITY if math.isnan(epsilon) else epsilon,
        seed=seed,
    )

def save_compressed(path: str, comp: CompressedActivation) -> None:
    """Write a compressed activation file atomically."""
    atomic_write_bytes(path, encode_compressed(comp))

def load_compressed(path: str) -> CompressedActivation:
    """Read a compressed activation file."""
    with open(path, "rb") as f:
        return decode_compressed(f.read())

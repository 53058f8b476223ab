"""Matrix files: the "PAMM" binary container and plain CSV."""

import io
import os
from enum import IntEnum

import numpy as np
from bitstring import ConstBitStream

from core.binary_readers import (
    byte_position,
    pack_uint8,
    pack_uint16,
    pack_uint64,
    read_magic,
    read_uint8,
    read_uintle16,
    read_uintle64,
    remaining_bytes,
)
from core.file import atomic_open, atomic_write_bytes
from core.logger import get_logger
from .exceptions import FormatError
from .ops import DenseMatrix, as_matrix

MATRIX_MAGIC = b"PAMM"
MATRIX_FORMAT_VERSION = 1
# magic + version + rows + cols + dtype
MATRIX_HEADER_SIZE = 4 + 2 + 8 + 8 + 1

class MatrixDType(IntEnum):
    """Scalar type codes of the binary matrix format."""
    FLOAT32 = 0
    FLOAT64 = 1

    @property
    def numpy_dtype(self) -> np.dtype:
        """Little-endian numpy dtype for this code."""
        return np.dtype("<f4") if self == MatrixDType.FLOAT32 else np.dtype("<f8")

    @classmethod
    def from_numpy(cls, dtype: np.dtype) -> 'MatrixDType':
        """Code for a numpy floating dtype."""
        if np.dtype(dtype) == np.float64:
            return cls.FLOAT64
        if np.dtype(dtype) == np.float32:
            return cls.FLOAT32
        raise FormatError(f"Unsupported matrix dtype: {dtype}")

def encode_matrix(matrix: DenseMatrix) -> bytes:
    """Serialize a float32/float64 matrix to the binary format."""
    matrix = as_matrix(matrix, name="matrix", allow_empty=True)
    code = MatrixDType.from_numpy(matrix.dtype)
    header = (MATRIX_MAGIC
              + pack_uint16(MATRIX_FORMAT_VERSION)
              + pack_uint64(matrix.shape[0])
              + pack_uint64(matrix.shape[1])
              + pack_uint8(code))
    return header + matrix.astype(code.numpy_dtype, copy=False).tobytes(order="C")

def decode_matrix(data: bytes) -> DenseMatrix:
    """
    Parse the binary matrix format.

    :param data: Whole file content.
    :return: Matrix in the stored precision (native byte order).
    :raises FormatError: On bad magic, unknown version or dtype, or a short payload.
    """
    if len(data) < MATRIX_HEADER_SIZE:
        raise FormatError("Truncated matrix header")

    stream = ConstBitStream(bytes=data)
    magic = read_magic(stream)
    if magic != MATRIX_MAGIC:
        raise FormatError(f"Not a matrix file (magic {magic!r})")

    version = read_uintle16(stream)
    if version != MATRIX_FORMAT_VERSION:
        raise FormatError(f"Unsupported matrix format version {version}")

    rows = read_uintle64(stream)
    cols = read_uintle64(stream)
    try:
        code = MatrixDType(read_uint8(stream))
    except ValueError as e:
        raise FormatError(f"Unknown matrix dtype code: {e}") from e

    expected = rows * cols * code.numpy_dtype.itemsize
    if remaining_bytes(stream) != expected:
        raise FormatError(f"Matrix payload is {remaining_bytes(stream)} bytes, expected {expected}")

    offset = byte_position(stream)
    payload = np.frombuffer(data, dtype=code.numpy_dtype, count=rows * cols, offset=offset)
    return payload.reshape(rows, cols).astype(code.numpy_dtype.newbyteorder("="))

def write_matrix_csv(path: str, matrix: DenseMatrix) -> None:
    """Write one matrix row per line as decimal text with round-trip precision."""
    matrix = as_matrix(matrix, name="matrix", allow_empty=True)
    fmt = "%.17g" if matrix.dtype == np.float64 else "%.9g"
    buffer = io.StringIO()
    np.savetxt(buffer, matrix, fmt=fmt, delimiter=",")
    with atomic_open(path, "w") as f:
        f.write(buffer.getvalue())

def read_matrix_csv(path: str) -> DenseMatrix:
    """Read a CSV matrix as 64-bit reals."""
    try:
        matrix = np.loadtxt(path, delimiter=",", dtype=np.float64, ndmin=2)
    except ValueError as e:
        raise FormatError(f"Malformed CSV matrix {path}: {e}") from e
    return as_matrix(matrix, name=path)

def is_csv_path(path: str) -> bool:
    """CSV is chosen by file extension; everything else is binary."""
    return os.path.splitext(path)[1].lower() == ".csv"

def save_matrix(path: str, matrix: DenseMatrix) -> None:
    """Save a matrix, picking the format from the extension."""
    if is_csv_path(path):
        write_matrix_csv(path, matrix)
    else:
        atomic_write_bytes(path, encode_matrix(matrix))
    get_logger().debug("Saved %s matrix to %s", np.shape(matrix), path)

def load_matrix(path: str) -> DenseMatrix:
    """Load a matrix, picking the format from the extension."""
    if is_csv_path(path):
        return read_matrix_csv(path)
    with open(path, "rb") as f:
        return as_matrix(decode_matrix(f.read()), name=path)

"""Provides utility functions to read and write little-endian scalars."""

import struct

from bitstring import ConstBitStream

def read_magic(f: ConstBitStream, size: int = 4) -> bytes:
    """Extract a fixed-size magic tag from a bit stream."""
    return f.read(f'bytes:{size}')
def read_uintle16(f: ConstBitStream) -> int:
    """Extract unsigned 16-bit integer from a bit stream in little-endian format."""
    return f.read('uintle:16')
def read_uintle64(f: ConstBitStream) -> int:
    """Extract unsigned 64-bit integer from a bit stream in little-endian format."""
    return f.read('uintle:64')
def read_uint8(f: ConstBitStream) -> int:
    """Extract unsigned 8-bit integer from a bit stream."""
    return f.read('uint:8')
def read_floatle64(f: ConstBitStream) -> float:
    """Extract 64-bit float from a bit stream in little-endian format."""
    return f.read('floatle:64')
def remaining_bytes(f: ConstBitStream) -> int:
    """Number of whole bytes left after the current position."""
    return (f.len - f.pos) // 8
def byte_position(f: ConstBitStream) -> int:
    """Current position in bytes."""
    return f.pos // 8

def pack_uint8(value: int) -> bytes:
    """Pack unsigned 8-bit integer."""
    return struct.pack('<B', value)
def pack_uint16(value: int) -> bytes:
    """Pack unsigned 16-bit integer, little-endian."""
    return struct.pack('<H', value)
def pack_uint64(value: int) -> bytes:
    """Pack unsigned 64-bit integer, little-endian."""
    return struct.pack('<Q', value)
def pack_float64(value: float) -> bytes:
    """Pack 64-bit float, little-endian."""
    return struct.pack('<d', value)

import math

import numpy as np
import pytest
from numpy.testing import assert_array_equal

from core.file import atomic_write_text
from core.linalg import FormatError
from core.pamm import (
    PammConfig,
    compress,
    decode_compressed,
    encode_compressed,
    load_compressed,
    save_compressed,
)
from core.pamm.compressed_io import COMPRESSED_HEADER_SIZE


@pytest.fixture
def comp():
    a = np.random.default_rng(0).standard_normal((20, 5)).astype(np.float32)
    return compress(a, PammConfig(k=4, epsilon=0.5, seed=99))


def test_compressed_file_keeps_every_field(comp, tmp_path):
    path = str(tmp_path / "a.pamc")
    save_compressed(path, comp)
    loaded = load_compressed(path)

    for name in ("b", "n", "k", "eta", "epsilon", "beta", "seed"):
        assert getattr(loaded, name) == getattr(comp, name)
    assert_array_equal(loaded.generators, comp.generators)
    assert_array_equal(loaded.alpha, comp.alpha)
    assert_array_equal(loaded.assignments, comp.assignments)


def test_compressed_encoding_is_deterministic(comp):
    data = encode_compressed(comp)
    assert data == encode_compressed(comp)
    assert len(data) == COMPRESSED_HEADER_SIZE + 4 * 5 * 4 + 20 * 4 + 20 * 4


def test_infinite_epsilon_survives_encoding():
    a = np.random.default_rng(1).standard_normal((8, 3)).astype(np.float32)
    decoded = decode_compressed(encode_compressed(compress(a, PammConfig(k=2))))
    assert math.isinf(decoded.epsilon)
    assert decoded.beta == 1.0


def test_corrupt_compressed_files_are_rejected(comp):
    data = encode_compressed(comp)
    with pytest.raises(FormatError):
        decode_compressed(b"PAMM" + data[4:])
    with pytest.raises(FormatError):
        decode_compressed(data[:COMPRESSED_HEADER_SIZE - 1])
    with pytest.raises(FormatError):
        decode_compressed(data + b"\x00")

    bad_index = bytearray(data)
    bad_index[-4:] = (comp.k).to_bytes(4, "little")
    with pytest.raises(FormatError):
        decode_compressed(bytes(bad_index))

    bad_version = bytearray(data)
    bad_version[4:6] = (7).to_bytes(2, "little")
    with pytest.raises(FormatError):
        decode_compressed(bytes(bad_version))


def test_atomic_write_replaces_whole_file(tmp_path):
    path = tmp_path / "nested" / "out.txt"
    atomic_write_text(str(path), "first\n")
    atomic_write_text(str(path), "second\n")
    assert path.read_text() == "second\n"
    assert [p.name for p in path.parent.iterdir()] == ["out.txt"]

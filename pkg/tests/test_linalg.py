import numpy as np
import pytest
from numpy.testing import assert_allclose, assert_array_equal

from core.linalg import (
    ArgumentError,
    FormatError,
    MatrixDType,
    NumericError,
    SeededSampler,
    ShapeError,
    as_matrix,
    cosine_similarity_matrix,
    decode_matrix,
    encode_matrix,
    frobenius_norm,
    load_matrix,
    matmul,
    matmul_oracle,
    row_norms,
    sample_without_replacement,
    save_matrix,
    spectral_norm,
)


def test_as_matrix_keeps_float_and_converts_ints():
    assert as_matrix(np.ones((2, 3))).dtype == np.float64
    assert as_matrix([[1, 2], [3, 4]]).dtype == np.float32
    with pytest.raises(ShapeError):
        as_matrix(np.ones(3))
    with pytest.raises(ArgumentError):
        as_matrix(np.ones((0, 3)))


def test_matmul_matches_oracle():
    rng = np.random.default_rng(0)
    a = rng.standard_normal((64, 8)).astype(np.float32)
    b = rng.standard_normal((64, 4)).astype(np.float32)
    exact = matmul_oracle(a, b)
    assert exact.dtype == np.float64
    assert frobenius_norm(matmul(a, b) - exact) / frobenius_norm(exact) < 1e-6


def test_matmul_identity():
    rng = np.random.default_rng(1)
    b = rng.standard_normal((5, 3))
    assert_allclose(matmul(np.eye(5), b), b)


def test_matmul_row_mismatch():
    with pytest.raises(ShapeError):
        matmul(np.ones((3, 2)), np.ones((4, 2)))


def test_row_and_frobenius_norms():
    a = np.array([[3.0, 4.0], [0.0, 0.0]])
    assert_allclose(row_norms(a), [5.0, 0.0])
    assert frobenius_norm(a) == 5.0


def test_spectral_norm_of_diagonal():
    estimate = spectral_norm(np.diag([3.0, 1.0, 0.5]))
    assert estimate.value == pytest.approx(3.0, rel=1e-8)
    assert estimate.iterations >= 1


def test_spectral_norm_is_reproducible_and_matches_svd():
    rng = np.random.default_rng(2)
    b = rng.standard_normal((40, 12))
    first = spectral_norm(b)
    assert first == spectral_norm(b)
    assert first.value == pytest.approx(np.linalg.svd(b, compute_uv=False)[0], rel=1e-6)


def test_spectral_norm_of_zero_matrix():
    assert spectral_norm(np.zeros((4, 3))).value == 0.0


def test_spectral_norm_rejects_non_finite():
    with pytest.raises(NumericError):
        spectral_norm(np.array([[1.0, np.nan]]))


def test_spectral_norm_lies_between_frobenius_bounds():
    rng = np.random.default_rng(4)
    for shape in [(30, 5), (5, 30), (64, 64), (7, 1)]:
        b = rng.standard_normal(shape)
        value = spectral_norm(b).value
        frobenius = frobenius_norm(b)
        assert frobenius / np.sqrt(min(shape)) * (1 - 1e-8) <= value <= frobenius * (1 + 1e-12)

    assert spectral_norm(np.eye(9)).value == pytest.approx(frobenius_norm(np.eye(9)) / 3)
    rank_one = np.outer(rng.standard_normal(12), rng.standard_normal(4))
    assert spectral_norm(rank_one).value == pytest.approx(frobenius_norm(rank_one), rel=1e-8)


def test_cosine_similarity_stays_in_unit_interval():
    rng = np.random.default_rng(5)
    c = rng.standard_normal((16, 8))
    near = c[rng.integers(0, 16, 64)] * rng.uniform(-5.0, 5.0, (64, 1))
    a = np.vstack([rng.standard_normal((64, 8)), near, near.astype(np.float32)])
    for left, right in ((a, c), (a.astype(np.float32), c.astype(np.float32))):
        csim = cosine_similarity_matrix(left, right)
        assert np.all(csim >= -1) and np.all(csim <= 1)


def test_cosine_similarity_guards_zero_rows():
    a = np.array([[1.0, 0.0], [0.0, 0.0], [1.0, 1.0]])
    c = np.array([[2.0, 0.0], [0.0, 0.0]])
    csim = cosine_similarity_matrix(a, c)
    assert_allclose(csim[:, 0], [1.0, 0.0, 1 / np.sqrt(2)])
    assert_array_equal(csim[:, 1], 0.0)
    assert_array_equal(csim[1], 0.0)


def test_sampler_is_deterministic_and_nested():
    sampler = SeededSampler(42)
    small = sample_without_replacement(sampler, 100, 10)
    large = sample_without_replacement(sampler, 100, 20)
    assert_array_equal(small, sample_without_replacement(SeededSampler(42), 100, 10))
    assert_array_equal(large[:10], small)
    assert np.unique(large).size == 20


def test_sampler_full_population_is_permutation():
    indices = sample_without_replacement(SeededSampler(3), 17, 17)
    assert_array_equal(np.sort(indices), np.arange(17))


def test_sampler_inclusion_is_uniform():
    trials, population, k = 10_000, 1000, 100
    counts = np.zeros(population, dtype=np.int64)
    for seed in range(trials):
        counts[sample_without_replacement(SeededSampler(seed), population, k)] += 1
    assert counts.sum() == trials * k

    # Each inclusion count is Binomial(trials, 0.1), so a 0.01 band is more than 3 sigma.
    frequency = counts / trials
    assert np.mean(np.abs(frequency - k / population) <= 0.01) >= 0.99


@pytest.mark.parametrize("k", [0, 11])
def test_sampler_rejects_bad_sizes(k):
    with pytest.raises(ArgumentError):
        sample_without_replacement(SeededSampler(0), 10, k)


def test_sampler_rejects_bad_seed():
    with pytest.raises(ArgumentError):
        SeededSampler(-1)


@pytest.mark.parametrize("dtype", [np.float32, np.float64])
def test_binary_matrix_round_trip(dtype):
    matrix = np.random.default_rng(4).standard_normal((7, 3)).astype(dtype)
    decoded = decode_matrix(encode_matrix(matrix))
    assert decoded.dtype == dtype
    assert_array_equal(decoded, matrix)


def test_binary_matrix_rejects_bad_input():
    data = encode_matrix(np.ones((2, 2), dtype=np.float32))
    with pytest.raises(FormatError):
        decode_matrix(b"XXXX" + data[4:])
    with pytest.raises(FormatError):
        decode_matrix(data[:-1])
    with pytest.raises(FormatError):
        decode_matrix(data[:10])
    with pytest.raises(FormatError):
        MatrixDType.from_numpy(np.int32)


def test_matrix_files_by_extension(tmp_path):
    matrix = np.random.default_rng(5).standard_normal((6, 4))
    csv_path = str(tmp_path / "m.csv")
    bin_path = str(tmp_path / "m.pamm")

    save_matrix(csv_path, matrix)
    save_matrix(bin_path, matrix)

    assert_array_equal(load_matrix(csv_path), matrix)
    assert_array_equal(load_matrix(bin_path), matrix)
    assert (tmp_path / "m.csv").read_text().count("\n") == 6

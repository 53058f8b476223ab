import dataclasses
import json
import math

import numpy as np
import pytest
from numpy.testing import assert_allclose, assert_array_equal

from core.linalg import ArgumentError, ShapeError, frobenius_norm, matmul_oracle, spectral_norm
from core.pamm import (
    CompressedActivation,
    PammConfig,
    UndefinedMetricError,
    apply_neighborhood_condition,
    approx_matmul,
    assign_and_project,
    compress,
    compress_with_generators,
    compute_beta,
    coverage_failure_probability,
    epsilon_neighborhood_sizes,
    error_bound_rhs,
    error_report,
    format_epsilon,
    k_bound,
    memory_footprint,
    memory_footprint_for,
    multiply_counts,
    neighborhood_matrix,
    parse_epsilon,
    reconstruct,
    relative_error,
    sample_generators,
    speedup_gamma,
)


def _line_residuals(row, generators):
    residuals = []
    for c in generators:
        squared = c @ c
        if squared == 0:
            residuals.append(np.inf)
            continue
        residuals.append(np.linalg.norm(row - (row @ c) / squared * c))
    return np.array(residuals)


def test_assignment_is_the_closest_line():
    rng = np.random.default_rng(0)
    cases = 0
    for n in (2, 4, 16):
        for k in (1, 4, 16):
            for _ in range(1000 // 9 + 1):
                row = rng.standard_normal(n)
                generators = rng.standard_normal((k, n))
                f, alpha = assign_and_project(row[None, :], generators)

                best = int(np.argmin(_line_residuals(row, generators)))
                assert f[0] == best, f"n={n} k={k}: picked {f[0]}, closest line is {best}"
                chosen = generators[f[0]]
                assert alpha[0] == pytest.approx(row @ chosen / (chosen @ chosen))
                cases += 1
    assert cases >= 1000


def test_assignment_ties_go_to_smallest_index():
    generators = np.array([[1.0, 0.0], [2.0, 0.0], [-1.0, 0.0]])
    f, alpha = assign_and_project(np.array([[3.0, 0.0]]), generators)
    assert f[0] == 0
    assert alpha[0] == 3.0


def test_antiparallel_generator_gives_negative_alpha():
    f, alpha = assign_and_project(np.array([[-2.0, 0.0]]), np.array([[1.0, 0.0], [0.0, 1.0]]))
    assert f[0] == 0
    assert alpha[0] == -2.0


def test_zero_rows_and_zero_generators():
    a = np.array([[0.0, 0.0], [1.0, 1.0]])
    c = np.array([[0.0, 0.0]])
    f, alpha = assign_and_project(a, c)
    assert_array_equal(alpha, [0.0, 0.0])

    kept, eta = apply_neighborhood_condition(a, c, f, alpha, math.inf)
    assert eta == 1
    assert_array_equal(kept, [0.0, 0.0])


def test_neighborhood_condition_drops_far_rows():
    a = np.array([[1.0, 0.0], [1.0, 0.1], [0.0, 1.0]])
    c = a[:1]
    f, alpha = assign_and_project(a, c)
    kept, eta = apply_neighborhood_condition(a, c, f, alpha, 0.2)
    assert eta == 1
    assert kept[2] == 0
    assert kept[1] == pytest.approx(1.0)


def test_compute_beta():
    assert compute_beta(10, 0) == 1.0
    assert compute_beta(10, 5) == 2.0
    assert compute_beta(10, 10) is None
    with pytest.raises(ArgumentError):
        compute_beta(10, 11)


def test_generators_represent_themselves():
    a = np.random.default_rng(1).standard_normal((32, 6))
    comp = compress(a, PammConfig(k=8, epsilon=0.0, seed=3))
    indices = sample_generators(32, PammConfig(k=8, seed=3))
    assert_array_equal(comp.assignments[indices], np.arange(8))
    assert_array_equal(comp.alpha[indices], 1.0)
    assert_array_equal(comp.generators, a[indices])


def test_epsilon_zero_is_uniform_row_sampling():
    rng = np.random.default_rng(2)
    a = rng.standard_normal((48, 6)).astype(np.float32)
    b = rng.standard_normal((48, 5)).astype(np.float32)
    cfg = PammConfig(k=12, epsilon=0.0, seed=7)
    comp = compress(a, cfg)
    indices = sample_generators(48, cfg)

    assert comp.eta == 36
    assert comp.beta == 4.0
    expected = 4.0 * (a[indices].astype(np.float64).T @ b[indices])
    assert_allclose(approx_matmul(comp, b), expected, rtol=1e-5, atol=1e-4)


def test_full_sample_is_exact():
    rng = np.random.default_rng(3)
    a = rng.standard_normal((64, 8)).astype(np.float32)
    b = rng.standard_normal((64, 4)).astype(np.float32)
    comp = compress(a, PammConfig(ratio=1.0))
    assert comp.eta == 0 and comp.beta == 1.0
    assert relative_error(matmul_oracle(a, b), approx_matmul(comp, b)) <= 1e-5


def test_rank_one_with_one_generator_is_exact():
    rng = np.random.default_rng(4)
    u = rng.uniform(0.5, 2.0, 40) * rng.choice([-1.0, 1.0], 40)
    v = rng.standard_normal(6)
    a = np.outer(u, v).astype(np.float32)
    b = rng.standard_normal((40, 3)).astype(np.float32)
    comp = compress(a, PammConfig(k=1, seed=11))
    assert comp.eta == 0
    assert_allclose(reconstruct(comp), a, rtol=1e-5, atol=1e-5)
    assert relative_error(matmul_oracle(a, b), approx_matmul(comp, b)) <= 1e-5


def test_approx_equals_rescaled_reconstruction():
    rng = np.random.default_rng(5)
    for case in range(200):
        b_rows = int(rng.integers(1, 129))
        n = int(rng.integers(1, 33))
        m = int(rng.integers(1, 17))
        r = [1.0, 0.5, 0.125][case % 3]
        epsilon = [0.0, 0.5, math.inf][(case // 3) % 3]

        a = rng.standard_normal((b_rows, n)).astype(np.float32)
        b = rng.standard_normal((b_rows, m)).astype(np.float32)
        comp = compress(a, PammConfig(ratio=r, epsilon=epsilon, seed=case))

        expected = reconstruct(comp).astype(np.float64).T @ b.astype(np.float64) * comp.beta
        got = approx_matmul(comp, b)
        norm = frobenius_norm(expected)
        assert frobenius_norm(got - expected) <= 1e-4 * max(norm, 1e-12)


def test_all_rows_dropped_gives_zero_product():
    comp = CompressedActivation(
        generators=np.ones((1, 3), dtype=np.float32),
        assignments=np.zeros(4, dtype=np.int64),
        alpha=np.zeros(4, dtype=np.float32),
        beta=None, b=4, n=3, k=1, eta=4, epsilon=0.0, seed=0,
    )
    product = approx_matmul(comp, np.ones((4, 2), dtype=np.float32))
    assert product.shape == (3, 2)
    assert not product.any()


def test_approx_rejects_row_mismatch():
    comp = compress(np.eye(4), PammConfig(k=2))
    with pytest.raises(ShapeError):
        approx_matmul(comp, np.ones((5, 2)))


def test_coverage_grows_with_epsilon_on_shared_generators():
    rng = np.random.default_rng(6)
    a = rng.standard_normal((128, 4))
    coverages = [compress(a, PammConfig(ratio=0.125, epsilon=e, seed=9)).coverage
                 for e in (0.0, 0.2, 0.5, 1.0, math.inf)]
    assert coverages == sorted(coverages)
    assert coverages[-1] == 1.0


def test_coverage_grows_with_k_on_nested_samples():
    rng = np.random.default_rng(7)
    a = rng.standard_normal((128, 4))
    coverages = [compress(a, PammConfig(k=k, epsilon=0.5, seed=13)).coverage for k in (2, 8, 32, 128)]
    assert coverages == sorted(coverages)
    assert coverages[-1] == 1.0


def test_small_example_with_one_generator():
    a = np.array([[1.0, 0.0], [0.0, 1.0], [2.0, 0.0]])

    comp = compress_with_generators(a, [0])
    assert_array_equal(comp.assignments, [0, 0, 0])
    assert_allclose(comp.alpha, [1.0, 0.0, 2.0])
    assert comp.eta == 0
    assert comp.beta == 1.0

    comp = compress_with_generators(a, [0], epsilon=0.5)
    assert_allclose(comp.alpha, [1.0, 0.0, 2.0])
    assert comp.eta == 1
    assert comp.beta == pytest.approx(1.5)


@pytest.mark.parametrize("dtype", [np.float32, np.float64])
def test_collinear_rows_survive_zero_epsilon(dtype):
    rng = np.random.default_rng(14)
    base = rng.standard_normal(6)
    collinear = np.outer([1.0, 0.1, -3.7, 1.0 / 3.0, 12.5], base)
    a = np.vstack([collinear, rng.standard_normal((3, 6))]).astype(dtype)

    comp = compress_with_generators(a, [0], epsilon=0.0)
    assert_array_equal(comp.kept_mask, [True] * 5 + [False] * 3)
    assert comp.eta == 3
    assert neighborhood_matrix(a, 0.0)[:5, 0].all()


def test_zero_epsilon_survivors_match_neighborhoods():
    rng = np.random.default_rng(15)
    directions = rng.standard_normal((4, 5))
    a = np.vstack([np.outer(rng.uniform(-3.0, 3.0, 16), d) for d in directions])
    a = np.vstack([a, rng.standard_normal((8, 5))])
    member = neighborhood_matrix(a, 0.0)

    for seed in range(10):
        indices = np.random.default_rng(seed).permutation(a.shape[0])[:6]
        comp = compress_with_generators(a, indices, epsilon=0.0)
        assert_array_equal(comp.kept_mask, member[:, indices].any(axis=1))


def test_kept_residuals_are_orthogonal_to_their_generator():
    rng = np.random.default_rng(16)
    a = rng.standard_normal((256, 12))
    for epsilon in (0.7, 0.95, math.inf):
        comp = compress(a, PammConfig(k=32, epsilon=epsilon, seed=3))
        kept = np.flatnonzero(comp.kept_mask)
        c = comp.generators[comp.assignments[kept]]
        residual = a[kept] - comp.alpha[kept, None] * c
        inner = np.einsum("ij,ij->i", residual, c)
        scale = np.linalg.norm(a[kept], axis=1) * np.linalg.norm(c, axis=1)
        assert np.all(np.abs(inner) <= 1e-4 * scale)


def test_kept_rows_are_nested_in_epsilon():
    rng = np.random.default_rng(17)
    a = rng.standard_normal((200, 6))
    indices = rng.permutation(200)[:20]
    previous = None
    for epsilon in (0.0, 0.3, 0.6, 0.8, 0.9, 0.99, math.inf):
        kept = compress_with_generators(a, indices, epsilon=epsilon).kept_mask
        if previous is not None:
            assert np.all(kept[previous])
        previous = kept


def test_more_generators_never_increase_a_residual():
    rng = np.random.default_rng(18)
    a = rng.standard_normal((128, 8))
    order = rng.permutation(128)
    previous = None
    for k in (1, 4, 16, 64, 128):
        comp = compress_with_generators(a, order[:k])
        residual = np.linalg.norm(a - reconstruct(comp), axis=1)
        if previous is not None:
            assert np.all(residual <= previous + 1e-9 * np.linalg.norm(a, axis=1))
        previous = residual


def test_error_bound_holds():
    rng = np.random.default_rng(8)
    for case in range(500):
        b_rows = int(rng.integers(2, 65))
        n = int(rng.integers(1, 17))
        m = int(rng.integers(1, 9))
        a = rng.standard_normal((b_rows, n))
        b = rng.standard_normal((b_rows, m))
        epsilon = float(rng.choice([0.0, 0.1, 0.3, 0.7, 1.5]))
        comp = compress(a, PammConfig(ratio=0.25, epsilon=epsilon, seed=case, use_beta=False))

        error = frobenius_norm(matmul_oracle(a, b) - approx_matmul(comp, b)) ** 2
        # Exact representatives give a zero bound; rounding needs an absolute floor.
        floor = 1e-10 * frobenius_norm(a) ** 2 * spectral_norm(b).value ** 2
        assert error <= error_bound_rhs(a, comp, b) * (1 + 1e-4) + floor, f"case {case}"


def test_error_bound_preconditions():
    a = np.random.default_rng(9).standard_normal((16, 3))
    b = np.ones((16, 2))
    with pytest.raises(ArgumentError):
        error_bound_rhs(a, compress(a, PammConfig(k=4)), b)
    with pytest.raises(ArgumentError):
        error_bound_rhs(a, compress(a, PammConfig(k=4, epsilon=0.0)), b)


def test_error_report_fields():
    rng = np.random.default_rng(10)
    a = rng.standard_normal((32, 4))
    b = rng.standard_normal((32, 3))
    comp = compress(a, PammConfig(k=8, epsilon=0.5))
    report = error_report(a, comp, b)
    assert report.eta == comp.eta
    assert report.coverage == comp.coverage
    assert report.bound_rhs is not None and report.bound_rhs > 0
    assert error_report(a, compress(a, PammConfig(k=8)), b).bound_rhs is None


def test_relative_error_of_zero_product():
    with pytest.raises(UndefinedMetricError):
        relative_error(np.zeros((2, 2)), np.ones((2, 2)))


def test_neighborhoods_of_collinear_rows():
    a = np.outer(np.arange(1.0, 9.0), [1.0, -2.0, 0.5])
    sizes, n_min = epsilon_neighborhood_sizes(a, 0.0)
    assert n_min == 8
    assert_array_equal(sizes, 8)


def test_neighborhoods_of_orthogonal_rows():
    sizes, n_min = epsilon_neighborhood_sizes(np.eye(6), 0.5)
    assert n_min == 1
    assert k_bound(6, n_min, 0.05) > 6
    assert epsilon_neighborhood_sizes(np.eye(6), math.inf)[1] == 6


def test_neighborhood_of_zero_row_accepts_everything():
    a = np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]])
    member = neighborhood_matrix(a, 0.1)
    assert member[0].all()
    assert not member[1, 0]
    assert member[1, 1]


def test_k_bound_value():
    assert k_bound(1024, 128, 0.05) == math.floor(8 * math.log(1024 / 0.05)) + 1
    with pytest.raises(ArgumentError):
        k_bound(10, 1, 1.0)


def test_coverage_failure_probability():
    assert coverage_failure_probability(4, [1, 1, 1, 1], 1).worst_row == pytest.approx(0.75)
    assert coverage_failure_probability(4, [4, 4, 4, 4], 1).union_bound == 0.0
    assert coverage_failure_probability(4, [1, 1, 1, 1], 4).worst_row == 0.0
    assert coverage_failure_probability(8, [2] * 8, 2).worst_row == pytest.approx(6 / 8 * 5 / 7)
    with pytest.raises(ArgumentError):
        coverage_failure_probability(4, [1, 1, 1, 1], 5)


def test_speedup_and_footprint_arithmetic():
    assert speedup_gamma(16384, 2048, 64) == pytest.approx(28.4, abs=0.1)
    footprint = memory_footprint_for(65536, 512, 128)
    assert footprint.compressed_scalars == 196608
    assert footprint.dense_scalars == 33554432
    assert footprint.ratio == pytest.approx(170.67, abs=0.01)
    assert multiply_counts(4, 2, 3, 2) == (24, 52)


def test_footprint_of_compression():
    comp = compress(np.random.default_rng(11).standard_normal((64, 8)), PammConfig(k=64))
    footprint = memory_footprint(comp)
    assert footprint.compressed_scalars == comp.stored_scalars == 64 * 8 + 128
    assert footprint.ratio < 1


@pytest.mark.parametrize("text, expected", [("inf", math.inf), ("Infinity", math.inf), ("0.25", 0.25), (0, 0.0)])
def test_parse_epsilon(text, expected):
    assert parse_epsilon(text) == expected


@pytest.mark.parametrize("text", ["-1", "nan", "abc"])
def test_parse_epsilon_rejects(text):
    with pytest.raises(ArgumentError):
        parse_epsilon(text)


def test_format_epsilon():
    assert format_epsilon(math.inf) == "inf"
    assert format_epsilon(0.5) == "0.5"


def test_config_effective_k_and_validation(tmp_path):
    assert PammConfig(ratio=0.1).effective_k(30) == 3
    assert PammConfig(ratio=0.01).effective_k(10) == 1
    assert PammConfig(k=5).effective_k(100) == 5
    with pytest.raises(ArgumentError):
        PammConfig(ratio=0.5, k=3)
    with pytest.raises(ArgumentError):
        PammConfig()
    with pytest.raises(ArgumentError):
        PammConfig(ratio=1.5)

    path = tmp_path / "pamm.json"
    path.write_text(json.dumps(PammConfig(k=4, epsilon=0.3, seed=2).to_dict()))
    loaded = PammConfig.from_file(str(path))
    assert loaded.k == 4 and loaded.epsilon == 0.3 and loaded.seed == 2


def test_compress_rejects_k_above_b():
    with pytest.raises(ArgumentError):
        compress(np.ones((4, 2)), PammConfig(k=5))


def test_compress_with_generators_validates_indices():
    a = np.ones((4, 2))
    for bad in ([], [0, 0], [4]):
        with pytest.raises(ArgumentError):
            compress_with_generators(a, bad)


def test_compressed_activation_is_read_only():
    comp = compress(np.random.default_rng(12).standard_normal((8, 3)), PammConfig(k=2))
    with pytest.raises(ValueError):
        comp.alpha[0] = 5.0
    assert dataclasses.replace(comp, beta=1.0).beta == 1.0

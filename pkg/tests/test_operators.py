import numpy as np
import pytest
import scipy.fft

from iterfilt import (
    BoundaryKind,
    Filter,
    StructuredOperator,
    diagonalized_power_apply,
    transform_apply,
    unit_eigenvectors,
)
from iterfilt.operators import _art_apply, _dct3_matrix, _dft_matrix, _dst1_matrix
from conftest import random_doubled_filter, random_filter

ALL_KINDS = list(BoundaryKind)
TRANSFORM_KINDS = [BoundaryKind.PERIODIC, BoundaryKind.REFLECTIVE, BoundaryKind.ANTIREFLECTIVE]

W5 = Filter(np.array([3 / 9, 2 / 9, 1 / 9]))  # (1/9,2/9,3/9,2/9,1/9) full


def iterate_direct(op, s, k):
    cur = np.asarray(s, dtype=float).copy()
    for _ in range(k):
        cur = cur - op.apply(cur)
    return cur


class TestApply:
    def test_constant_fixed_point_periodic_reflective(self, rng):
        for kind in (BoundaryKind.PERIODIC, BoundaryKind.REFLECTIVE):
            op = StructuredOperator(random_filter(rng, 3), kind, 12)
            out = op.apply(np.ones(12))
            assert np.abs(out - 1.0).max() == 0.0

    def test_ramp_fixed_point_antireflective(self, rng):
        op = StructuredOperator(random_filter(rng, 4), BoundaryKind.ANTIREFLECTIVE, 14)
        ramp = np.arange(14.0)
        assert np.abs(op.apply(ramp) - ramp).max() <= 1e-12

    def test_zero_kind_first_output(self):
        # leading taps overlap the zero pad: first output is w0+w1+w2 = 2/3
        op = StructuredOperator(W5, BoundaryKind.ZERO, 8)
        out = op.apply(np.ones(8))
        assert out[0] == pytest.approx(3 / 9 + 2 / 9 + 1 / 9, abs=1e-15)
        dense = op.to_dense()
        assert np.abs(out - dense.sum(axis=1)).max() <= 1e-14

    def test_dimension_mismatch(self, rng):
        op = StructuredOperator(random_filter(rng, 2), BoundaryKind.PERIODIC, 10)
        with pytest.raises(ValueError):
            op.apply(np.ones(11))

    def test_inadmissible_filter_length(self, rng):
        with pytest.raises(ValueError, match="filter length"):
            StructuredOperator(random_filter(rng, 5), BoundaryKind.PERIODIC, 10)


class TestDenseOracle:
    def test_apply_matches_dense_all_kinds(self, rng):
        for kind in ALL_KINDS:
            for n in (8, 16, 33, 64):
                for _ in range(3):
                    l = int(rng.integers(1, (n - 1) // 2 + 1))
                    op = StructuredOperator(random_filter(rng, l), kind, n)
                    x = rng.standard_normal(n)
                    assert np.abs(op.apply(x) - op.to_dense() @ x).max() <= 1e-13

    def test_columns_are_basis_images(self, rng):
        for kind in ALL_KINDS:
            op = StructuredOperator(random_filter(rng, 3), kind, 9)
            dense = op.to_dense()
            for j in range(9):
                e = np.zeros(9)
                e[j] = 1.0
                assert np.abs(dense[:, j] - op.apply(e)).max() <= 1e-14

    def test_periodic_circulant_first_row(self):
        op = StructuredOperator(Filter(np.array([0.5, 0.25])), BoundaryKind.PERIODIC, 4)
        assert np.allclose(op.to_dense()[0], [0.5, 0.25, 0.0, 0.25], atol=1e-15)

    def test_antireflective_corner_rows(self, rng):
        op = StructuredOperator(random_filter(rng, 3), BoundaryKind.ANTIREFLECTIVE, 11)
        dense = op.to_dense()
        assert dense[0, 0] == pytest.approx(1.0, abs=1e-14)
        assert np.abs(dense[0, 1:]).max() == 0.0
        assert dense[-1, -1] == pytest.approx(1.0, abs=1e-14)
        assert np.abs(dense[-1, :-1]).max() == 0.0

    def test_symmetry_of_symmetric_kinds(self, rng):
        for kind in (BoundaryKind.ZERO, BoundaryKind.PERIODIC, BoundaryKind.REFLECTIVE):
            dense = StructuredOperator(random_filter(rng, 4), kind, 13).to_dense()
            assert np.abs(dense - dense.T).max() == 0.0
        ar = StructuredOperator(random_filter(rng, 4), BoundaryKind.ANTIREFLECTIVE, 13).to_dense()
        assert np.abs(ar - ar.T).max() > 1e-3  # not symmetric in general

    def test_row_sums(self, rng):
        for kind in TRANSFORM_KINDS:
            dense = StructuredOperator(random_filter(rng, 4), kind, 13).to_dense()
            assert np.abs(dense.sum(axis=1) - 1.0).max() <= 1e-13
        dense = StructuredOperator(random_filter(rng, 4), BoundaryKind.ZERO, 13).to_dense()
        sums = dense.sum(axis=1)
        assert sums[0] < 1.0 and sums[-1] < 1.0

    def test_size_guard(self, rng):
        op = StructuredOperator(random_filter(rng, 2), BoundaryKind.PERIODIC, 5000)
        with pytest.raises(ValueError, match="dense"):
            op.to_dense()


class TestEigenvalues:
    def test_leading_eigenvalue_is_one(self, rng):
        for kind in (BoundaryKind.PERIODIC, BoundaryKind.REFLECTIVE):
            spec = StructuredOperator(random_filter(rng, 3), kind, 16).eigenvalues()
            assert spec.eigenvalues[0] == pytest.approx(1.0, abs=1e-14)

    def test_periodic_value_at_angle_pi(self):
        # even n puts one Fourier angle at pi: 3/9 - 4/9 + 2/9 = 1/9
        op = StructuredOperator(W5, BoundaryKind.PERIODIC, 8)
        vals = op.eigenvalues().eigenvalues
        assert np.abs(vals - 1 / 9).min() <= 1e-14
        dense_vals = op.dense_spectrum().eigenvalues
        assert np.abs(vals - dense_vals).max() <= 1e-10

    def test_antireflective_unit_multiplicity_two(self, rng):
        for _ in range(5):
            op = StructuredOperator(random_filter(rng, 3), BoundaryKind.ANTIREFLECTIVE, 12)
            assert op.eigenvalues().unit_multiplicity == 2

    def test_closed_form_matches_dense_multiset(self, rng):
        for kind in TRANSFORM_KINDS:
            for n in (8, 16, 33):
                l = int(rng.integers(1, (n - 1) // 2 + 1))
                op = StructuredOperator(random_filter(rng, l), kind, n)
                closed = op.eigenvalues().eigenvalues
                dense = op.dense_spectrum().eigenvalues
                assert np.abs(closed - dense).max() <= 1e-10

    def test_zero_kind_has_no_closed_form(self, rng):
        op = StructuredOperator(random_filter(rng, 2), BoundaryKind.ZERO, 10)
        with pytest.raises(ValueError, match="closed-form"):
            op.eigenvalues()
        assert op.dense_spectrum().eigenvalues.size == 10  # numerical fallback

    def test_lemma_spectrum_in_minus_one_one(self, rng):
        for _ in range(10):
            n = int(rng.choice([9, 16, 33]))
            l = int(rng.integers(1, (n - 1) // 2 + 1))
            filt = random_filter(rng, l)
            for kind in TRANSFORM_KINDS:
                vals = StructuredOperator(filt, kind, n).dense_spectrum().eigenvalues
                assert vals.max() <= 1.0 + 1e-10
                assert vals.min() >= -1.0 - 1e-10

    def test_doubled_filter_spectrum_in_zero_one(self, rng):
        for _ in range(10):
            n = int(rng.choice([13, 16, 33]))
            filt = random_doubled_filter(rng, n)
            for kind, mult in zip(TRANSFORM_KINDS, (1, 1, 2)):
                spec = StructuredOperator(filt, kind, n).eigenvalues()
                assert spec.eigenvalues.min() >= -1e-12
                assert spec.eigenvalues.max() <= 1.0 + 1e-12
                assert spec.unit_multiplicity == mult


class TestUnitEigenvectors:
    def test_periodic_constant(self):
        vecs = unit_eigenvectors(BoundaryKind.PERIODIC, 5)
        assert len(vecs) == 1 and np.array_equal(vecs[0], np.ones(5))

    def test_antireflective_ramps(self):
        vecs = unit_eigenvectors(BoundaryKind.ANTIREFLECTIVE, 4)
        assert np.array_equal(vecs[0], [0.0, 1.0, 2.0, 3.0])
        assert np.array_equal(vecs[1], [3.0, 2.0, 1.0, 0.0])

    def test_zero_kind_rejected(self):
        with pytest.raises(ValueError):
            unit_eigenvectors(BoundaryKind.ZERO, 5)

    def test_residual_on_random_filters(self, rng):
        for _ in range(10):
            n = int(rng.choice([8, 15, 32]))
            l = int(rng.integers(1, (n - 1) // 2 + 1))
            filt = random_filter(rng, l)
            for kind in TRANSFORM_KINDS:
                op = StructuredOperator(filt, kind, n)
                for u in unit_eigenvectors(kind, n):
                    assert np.abs(op.apply(u) - u).max() <= 1e-12


class TestTransforms:
    def test_dst1_of_first_basis_vector(self):
        out = transform_apply("dst1", [1.0, 0.0, 0.0])
        expected = np.sqrt(2 / 4) * np.sin(np.arange(1, 4) * np.pi / 4)
        assert np.abs(out - expected).max() <= 1e-15

    def test_dct3_norm_preservation(self, rng):
        for _ in range(5):
            x = rng.standard_normal(17)
            out = transform_apply("dct3", x)
            assert abs(np.linalg.norm(out) - np.linalg.norm(x)) <= 1e-12

    def test_dst1_norm_preservation(self, rng):
        x = rng.standard_normal(14)
        assert abs(np.linalg.norm(transform_apply("dst1", x)) - np.linalg.norm(x)) <= 1e-12

    def test_dft_unitary(self, rng):
        x = rng.standard_normal(16)
        out = transform_apply("dft", x)
        assert abs(np.linalg.norm(out) - np.linalg.norm(x)) <= 1e-12

    def test_dct3_against_scipy(self, rng):
        # this cosine matrix coincides with scipy's orthonormal DCT-II
        x = rng.standard_normal(21)
        assert np.abs(transform_apply("dct3", x) - scipy.fft.dct(x, type=2, norm="ortho")).max() <= 1e-12

    def test_dst1_against_scipy(self, rng):
        x = rng.standard_normal(19)
        assert np.abs(transform_apply("dst1", x) - scipy.fft.dst(x, type=1, norm="ortho")).max() <= 1e-12

    def test_dst1_self_inverse(self, rng):
        x = rng.standard_normal(12)
        assert np.abs(transform_apply("dst1", transform_apply("dst1", x)) - x).max() <= 1e-11

    def test_dft_fast_path_matches_direct(self, rng):
        x = rng.standard_normal(33)
        direct = transform_apply("dft", x)
        fast = transform_apply("dft", x, fast=True)
        assert np.abs(direct - fast).max() <= 1e-11

    def test_art_first_column_normalized(self):
        n = 9
        e0 = np.zeros(n)
        e0[0] = 1.0
        col = transform_apply("art", e0)
        assert abs(np.linalg.norm(col) - 1.0) <= 1e-12

    def test_art_not_orthogonal(self, rng):
        x = rng.standard_normal(10)
        out = transform_apply("art", x)
        assert abs(np.linalg.norm(out) - np.linalg.norm(x)) > 1e-6

    def test_art_inverse_round_trip(self, rng):
        x = rng.standard_normal(15)
        assert np.abs(transform_apply("art_inverse", transform_apply("art", x)) - x).max() <= 1e-11

    def test_unknown_transform(self):
        with pytest.raises(ValueError, match="unknown"):
            transform_apply("hadamard", np.ones(4))

    def test_fast_only_for_dft(self):
        with pytest.raises(ValueError, match="fast"):
            transform_apply("dct3", np.ones(4), fast=True)


class TestDiagonalization:
    def test_reconstruction_matches_dense(self, rng):
        # eigenbasis round trip rebuilds the dense operator for all three kinds
        n = 14
        filt = random_filter(rng, 4)

        op = StructuredOperator(filt, BoundaryKind.PERIODIC, n)
        Q = _dft_matrix(n)
        lam = op._transform_eigenvalues()
        rebuilt = (Q @ np.diag(lam) @ np.conj(Q)).real
        assert np.abs(rebuilt - op.to_dense()).max() <= 1e-10

        op = StructuredOperator(filt, BoundaryKind.REFLECTIVE, n)
        Q = _dct3_matrix(n)
        lam = op._transform_eigenvalues()
        rebuilt = Q.T @ np.diag(lam) @ Q
        assert np.abs(rebuilt - op.to_dense()).max() <= 1e-10

        op = StructuredOperator(filt, BoundaryKind.ANTIREFLECTIVE, n)
        lam = op._transform_eigenvalues()
        cols = [_art_apply(col) for col in np.eye(n)]
        Q = np.column_stack(cols)
        rebuilt = Q @ np.diag(lam) @ np.linalg.inv(Q)
        assert np.abs(rebuilt - op.to_dense()).max() <= 1e-10

    def test_dst1_diagonalizes_interior_block(self, rng):
        # the sine transform diagonalizes the interior of the anti-reflective form
        n = 12
        op = StructuredOperator(random_filter(rng, 3), BoundaryKind.ANTIREFLECTIVE, n)
        inner = op.to_dense()[1:-1, 1:-1]
        S = _dst1_matrix(n - 2)
        diag = S @ inner @ S
        off = diag - np.diag(np.diag(diag))
        assert np.abs(off).max() <= 1e-12


class TestDiagonalizedPowerApply:
    def test_k0_identity(self, rng):
        op = StructuredOperator(random_filter(rng, 3), BoundaryKind.REFLECTIVE, 12)
        s = rng.standard_normal(12)
        assert np.array_equal(diagonalized_power_apply(op, s, 0), s)

    def test_k1_single_step(self, rng):
        for kind in TRANSFORM_KINDS:
            op = StructuredOperator(random_filter(rng, 3), kind, 12)
            s = rng.standard_normal(12)
            expected = s - op.apply(s)
            assert np.abs(diagonalized_power_apply(op, s, 1) - expected).max() <= 1e-12

    def test_k100_matches_direct_iteration(self, rng):
        for kind in TRANSFORM_KINDS:
            op = StructuredOperator(random_doubled_filter(rng, 16), kind, 16)
            s = rng.standard_normal(16)
            spectral = diagonalized_power_apply(op, s, 100)
            assert np.abs(spectral - iterate_direct(op, s, 100)).max() <= 1e-9

    def test_fast_periodic_path(self, rng):
        op = StructuredOperator(random_doubled_filter(rng, 32), BoundaryKind.PERIODIC, 32)
        s = rng.standard_normal(32)
        slow = diagonalized_power_apply(op, s, 50)
        fast = diagonalized_power_apply(op, s, 50, fast=True)
        assert np.abs(slow - fast).max() <= 1e-11

    def test_zero_kind_unsupported(self, rng):
        op = StructuredOperator(random_filter(rng, 2), BoundaryKind.ZERO, 10)
        with pytest.raises(ValueError, match="transform"):
            diagonalized_power_apply(op, np.ones(10), 3)

    def test_fast_flag_only_periodic(self, rng):
        op = StructuredOperator(random_filter(rng, 2), BoundaryKind.REFLECTIVE, 10)
        with pytest.raises(ValueError, match="fast"):
            diagonalized_power_apply(op, np.ones(10), 3, fast=True)

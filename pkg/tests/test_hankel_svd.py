import numpy as np
import pytest
from scipy import linalg

from hifwatch.errors import DegenerateInputError, NonFiniteSampleError, NumericalError, ParameterError
from hifwatch.havok import build_hankel, marchenko_pastur_median, optimal_rank, svd, svht_coefficient
from hifwatch.havok import decomposition


class TestBuildHankel:
    def test_wide_window(self):
        h = build_hankel(np.array([1.0, 2.0, 3.0, 4.0]), 3, allow_wide=True)
        np.testing.assert_array_equal(h.matrix, [[1, 2, 3], [2, 3, 4]])

    def test_window_above_half_length_rejected(self):
        with pytest.raises(ParameterError):
            build_hankel(np.array([1.0, 2.0, 3.0, 4.0]), 3)

    @pytest.mark.parametrize("k", [0, 1, 5, 2.0])
    def test_invalid_windows(self, k):
        with pytest.raises(ParameterError):
            build_hankel(np.arange(8.0), k)

    def test_anti_diagonals_are_constant(self):
        x = np.random.default_rng(0).normal(size=50)
        h = build_hankel(x, 10)
        assert h.matrix.shape == (41, 10)
        i, j = np.indices(h.matrix.shape)
        np.testing.assert_array_equal(h.matrix, x[i + j])

    def test_row_timestamps_are_newest_sample(self):
        t = np.linspace(0.0, 1.0, 20)
        h = build_hankel(np.arange(20.0), 4, t)
        np.testing.assert_array_equal(h.row_timestamps, t[3:])
        assert h.aspect_beta == pytest.approx(4 / 17)

    def test_timestamp_length_mismatch(self):
        with pytest.raises(ParameterError):
            build_hankel(np.arange(10.0), 3, np.arange(9.0))


class TestSvd:
    def test_constant_series_has_rank_one(self):
        factors = svd(build_hankel(np.full(200, 3.0), 20))
        assert factors.rank_above() == 1

    def test_sinusoid_energy_in_two_values(self):
        n = np.arange(256)
        factors = svd(build_hankel(np.sin(2 * np.pi * n / 64), 64))
        top_two = np.sum(factors.singular_values[:2] ** 2)
        assert top_two / factors.energy >= 0.999

    def test_identity(self):
        np.testing.assert_allclose(svd(np.eye(5)).singular_values, np.ones(5))

    def test_rank_one_matrix(self):
        rng = np.random.default_rng(1)
        m = np.outer(rng.normal(size=12), rng.normal(size=6))
        assert svd(m).rank_above(1e-10) == 1

    def test_reconstruction_and_orthonormality(self):
        m = np.random.default_rng(2).normal(size=(64, 32))
        factors = svd(m)
        assert np.max(np.abs(factors.reconstruct() - m)) < 1e-10
        np.testing.assert_allclose(factors.left_vectors.T @ factors.left_vectors, np.eye(32), atol=1e-10)
        np.testing.assert_allclose(factors.right_vectors.T @ factors.right_vectors, np.eye(32), atol=1e-10)
        assert factors.energy == pytest.approx(np.sum(m ** 2))

    def test_sign_convention(self):
        factors = svd(np.random.default_rng(3).normal(size=(30, 8)))
        u = factors.left_vectors
        largest = u[np.argmax(np.abs(u), axis=0), np.arange(u.shape[1])]
        assert np.all(largest > 0)

    def test_full_matrices(self):
        factors = svd(np.random.default_rng(4).normal(size=(10, 4)), full_matrices=True)
        assert factors.left_vectors.shape == (10, 10)
        assert factors.shape == (10, 4)

    def test_non_finite_entry(self):
        m = np.ones((4, 3))
        m[2, 1] = np.nan
        with pytest.raises(NonFiniteSampleError):
            svd(m)

    def test_lapack_failure_reports_diagnostics(self, monkeypatch):
        def failing_svd(*args, **kwargs):
            raise linalg.LinAlgError("no convergence")

        monkeypatch.setattr(decomposition.linalg, "svd", failing_svd)
        with pytest.raises(NumericalError) as excinfo:
            svd(np.ones((4, 3)))
        assert excinfo.value.diagnostics["shape"] == (4, 3)
        assert excinfo.value.diagnostics["frobenius_norm"] == pytest.approx(np.sqrt(12))


class TestOptimalRank:
    def test_single_dominant_value_clamps_to_two(self):
        s = np.array([10.0] + [1e-12] * 9)
        assert optimal_rank(s, 1.0) == 2

    def test_zero_median(self):
        assert optimal_rank(np.array([5.0, 4.0, 3.0, 0, 0, 0, 0]), 1.0) == 3

    def test_min_rank_floor(self):
        s = np.array([10.0] + [1e-12] * 9)
        assert optimal_rank(s, 1.0, min_rank=3) == 3

    def test_scale_invariance(self):
        s = np.sort(np.random.default_rng(5).exponential(size=40))[::-1]
        expected = optimal_rank(s, 0.5)
        for c in (1e-3, 1.0, 1e3):
            assert optimal_rank(c * s, 0.5) == expected

    def test_all_zero(self):
        with pytest.raises(DegenerateInputError):
            optimal_rank(np.zeros(6), 1.0)

    def test_increasing_spectrum_rejected(self):
        with pytest.raises(ParameterError):
            optimal_rank(np.array([1.0, 2.0, 3.0]), 1.0)

    def test_negative_value_rejected(self):
        with pytest.raises(ParameterError):
            optimal_rank(np.array([3.0, 1.0, -1.0]), 1.0)

    @pytest.mark.parametrize("beta", [0.0, -0.5, 1.5])
    def test_beta_range(self, beta):
        with pytest.raises(ParameterError):
            optimal_rank(np.array([3.0, 2.0, 1.0]), beta)

    def test_known_noise_needs_sigma(self):
        with pytest.raises(ParameterError):
            optimal_rank(np.array([3.0, 2.0, 1.0]), 1.0, noise_known=True)

    def _noisy_rank_five(self, rng, n=100, sigma=1e-3):
        left, _ = np.linalg.qr(rng.normal(size=(n, 5)))
        right, _ = np.linalg.qr(rng.normal(size=(n, 5)))
        signal = (left * np.array([10.0, 8.0, 6.0, 4.0, 2.0])) @ right.T
        return signal + sigma * rng.normal(size=(n, n))

    def test_recovers_rank_of_noisy_low_rank_matrix(self):
        rng = np.random.default_rng(6)
        for _ in range(100):
            s = svd(self._noisy_rank_five(rng)).singular_values
            assert optimal_rank(s, 1.0) in (4, 5, 6)

    def test_known_noise_threshold(self):
        rng = np.random.default_rng(7)
        s = svd(self._noisy_rank_five(rng)).singular_values
        assert optimal_rank(s, 1.0, noise_known=True, noise_sigma=1e-3, n_rows=100) in (4, 5, 6)


class TestSvhtCoefficient:
    def test_square_matrix_approximation(self):
        assert svht_coefficient(1.0) == pytest.approx(2.86)

    def test_known_noise_square(self):
        assert svht_coefficient(1.0, noise_known=True) == pytest.approx(4 / np.sqrt(3))

    def test_marchenko_pastur_median_square(self):
        assert marchenko_pastur_median(1.0) == pytest.approx(0.6529, rel=2e-3)

    @pytest.mark.parametrize("beta", [0.25, 0.5, 1.0])
    def test_exact_rule_close_to_approximation(self, beta):
        exact = svht_coefficient(beta, median_rule="exact")
        assert exact == pytest.approx(svht_coefficient(beta), rel=1e-2)

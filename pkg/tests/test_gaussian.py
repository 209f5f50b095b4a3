import numpy as np
import pytest
from scipy.stats import kstest

from roughlab import (
    GaussianSpec,
    SeededRng,
    cm_norm,
    fbm_covariance,
    projection_metric,
    sample_path,
    sample_paths,
    sample_vectors,
    schauder_coeffs,
    schauder_functional_norms,
    sup_distance,
    SampledPath,
)


def linear_basis_path(grid):
    """First Cameron-Martin basis element t / sqrt(T)."""
    return SampledPath(grid, grid / np.sqrt(grid[-1]))


def tent_basis_path(grid):
    """Second basis element: integrated level-0 Haar step, peak T/2."""
    horizon = grid[-1]
    vals = np.minimum(grid, horizon - grid) / np.sqrt(horizon)
    return SampledPath(grid, vals)


class TestSpecValidation:
    def test_kinds(self):
        with pytest.raises(ValueError):
            GaussianSpec("levy")
        with pytest.raises(ValueError):
            GaussianSpec.fbm(hurst=1.5)
        with pytest.raises(ValueError):
            GaussianSpec.ornstein_uhlenbeck(theta=-1.0, sigma=1.0)
        with pytest.raises(ValueError):
            GaussianSpec.brownian(n=1)

    def test_finite_dim_checks(self):
        with pytest.raises(ValueError):
            GaussianSpec.finite_dim([0.0, 0.0], [[1.0, 0.0]])
        with pytest.raises(ValueError):
            GaussianSpec.finite_dim([0.0], [[-1.0]])

    def test_sigma2_is_top_eigenvalue(self):
        cov = np.array([[2.0, 0.5], [0.5, 1.0]])
        spec = GaussianSpec.finite_dim(np.zeros(2), cov)
        assert spec.sigma2() == pytest.approx(np.max(np.linalg.eigvalsh(cov)))

    def test_sigma2_matches_worst_functional_variance(self):
        # Monte Carlo oracle: the variance of the top eigenvector's
        # projection should reach sigma2 within three standard errors.
        cov = np.array([[2.0, 0.5], [0.5, 1.0]])
        spec = GaussianSpec.finite_dim(np.zeros(2), cov)
        vals, vecs = np.linalg.eigh(cov)
        top = vecs[:, -1]
        draws = sample_vectors(spec, SeededRng(10, 0), 100_000) @ top
        est = float(np.var(draws))
        se = est * np.sqrt(2.0 / (draws.size - 1))
        assert abs(est - spec.sigma2()) <= 3.0 * se


class TestSampling:
    def test_deterministic_given_seed_and_stream(self):
        spec = GaussianSpec.brownian(n=64, dim=2)
        a = sample_path(spec, SeededRng(42, 7))
        b = sample_path(spec, SeededRng(42, 7))
        assert np.array_equal(a.values, b.values)
        c = sample_path(spec, SeededRng(42, 8))
        assert not np.array_equal(a.values, c.values)

    def test_paths_start_at_zero(self):
        for spec in (
            GaussianSpec.brownian(n=16, dim=2),
            GaussianSpec.fbm(0.7, n=16),
            GaussianSpec.ornstein_uhlenbeck(1.0, 0.5, n=16),
            GaussianSpec.bridge(n=16),
        ):
            path = sample_path(spec, SeededRng(1, 0))
            assert np.all(path.values[0] == 0.0)

    def test_brownian_increments_ks(self):
        # 10^4 increments scaled by 1/sqrt(dt) against the standard normal
        spec = GaussianSpec.brownian(horizon=1.0, n=10_001, dim=1)
        path = sample_path(spec, SeededRng(2024, 0))
        dt = np.diff(path.times)
        scaled = np.diff(path.values[:, 0]) / np.sqrt(dt)
        stat = kstest(scaled, "norm")
        assert stat.pvalue > 1e-3

    def test_two_point_grid_single_increment(self):
        spec = GaussianSpec.brownian(horizon=4.0, n=2, dim=1)
        draws = np.array(
            [sample_path(spec, SeededRng(3, s)).values[1, 0] for s in range(4000)]
        )
        stat = kstest(draws / 2.0, "norm")
        assert stat.pvalue > 1e-3

    def test_fbm_half_reduces_to_brownian_covariance(self):
        t = np.linspace(0.0, 1.0, 9)[1:]
        assert np.max(np.abs(fbm_covariance(t, 0.5) - np.minimum.outer(t, t))) < 1e-10

    def test_fbm_empirical_covariance(self):
        spec = GaussianSpec.fbm(0.3, horizon=1.0, n=9, dim=1)
        batch = sample_paths(spec, SeededRng(5, 0), 100_000)[:, :, 0]
        t = spec.grid()
        cov = fbm_covariance(t[1:], 0.3)
        probes = [(0, 0), (7, 7), (0, 7), (3, 5), (2, 6)]
        for i, j in probes:
            emp = float(np.mean(batch[:, i + 1] * batch[:, j + 1]))
            se = np.sqrt((cov[i, i] * cov[j, j] + cov[i, j] ** 2) / batch.shape[0])
            assert abs(emp - cov[i, j]) <= 3.0 * se

    def test_bridge_pinned_at_both_ends(self):
        spec = GaussianSpec.bridge(horizon=2.0, n=33)
        batch = sample_paths(spec, SeededRng(6, 0), 100)
        assert np.all(batch[:, 0, :] == 0.0)
        assert np.max(np.abs(batch[:, -1, :])) < 1e-12

    def test_ou_stationary_variance(self):
        theta, sigma = 2.0, 0.8
        spec = GaussianSpec.ornstein_uhlenbeck(theta, sigma, horizon=4.0, n=65)
        batch = sample_paths(spec, SeededRng(7, 0), 50_000)[:, -1, 0]
        target = sigma**2 * (1.0 - np.exp(-2 * theta * 4.0)) / (2 * theta)
        est = float(np.var(batch))
        se = target * np.sqrt(2.0 / (batch.size - 1))
        assert abs(est - target) <= 4.0 * se

    def test_vectors_need_finite_dim(self):
        with pytest.raises(ValueError):
            sample_vectors(GaussianSpec.brownian(), SeededRng(0, 0), 5)
        with pytest.raises(ValueError):
            sample_paths(GaussianSpec.finite_dim([0.0], [[1.0]]), SeededRng(0, 0), 5)


class TestCameronMartin:
    def test_linear_slope_one(self):
        grid = np.linspace(0.0, 1.0, 65)
        assert cm_norm(SampledPath(grid, grid)) == pytest.approx(1.0, abs=1e-12)

    def test_zero_path(self):
        grid = np.linspace(0.0, 1.0, 65)
        assert cm_norm(SampledPath(grid, np.zeros(65))) == 0.0

    def test_tent_unit_energy(self):
        # slope +-1 almost everywhere integrates to one
        grid = np.linspace(0.0, 1.0, 65)
        tent = np.minimum(grid, 1.0 - grid)
        assert cm_norm(SampledPath(grid, tent)) == pytest.approx(1.0, abs=1e-12)

    def test_requires_zero_start(self):
        grid = np.linspace(0.0, 1.0, 5)
        with pytest.raises(ValueError):
            cm_norm(SampledPath(grid, grid + 1.0))


class TestSchauder:
    def test_first_basis_coefficient(self):
        grid = np.linspace(0.0, 1.0, 33)
        coeffs = schauder_coeffs(linear_basis_path(grid), 8)
        expected = np.zeros(8)
        expected[0] = 1.0
        assert np.allclose(coeffs, expected, atol=1e-12)

    def test_linearity_two_elements(self):
        grid = np.linspace(0.0, 1.0, 33)
        combo = SampledPath(
            grid, linear_basis_path(grid).values + 2.0 * tent_basis_path(grid).values
        )
        coeffs = schauder_coeffs(combo, 8)
        expected = np.zeros(8)
        expected[0], expected[1] = 1.0, 2.0
        assert np.allclose(coeffs, expected, atol=1e-12)

    def test_parseval_at_full_resolution(self):
        gen = np.random.default_rng(21)
        grid = np.linspace(0.0, 2.0, 129)
        for _ in range(20):
            vals = np.concatenate([[0.0], np.cumsum(gen.normal(size=128) * 0.1)])
            path = SampledPath(grid, vals)
            coeffs = schauder_coeffs(path, 128)
            assert np.sqrt(np.sum(coeffs**2)) == pytest.approx(
                cm_norm(path), abs=1e-10
            )

    def test_partial_sums_grow_to_full_energy(self):
        gen = np.random.default_rng(22)
        grid = np.linspace(0.0, 1.0, 65)
        vals = np.concatenate([[0.0], np.cumsum(gen.normal(size=64) * 0.1)])
        path = SampledPath(grid, vals)
        coeffs = schauder_coeffs(path, 64)
        partial = np.sqrt(np.cumsum(coeffs**2))
        assert np.all(np.diff(partial) >= -1e-15)
        assert partial[-1] == pytest.approx(cm_norm(path), abs=1e-10)

    def test_rejects_non_dyadic_or_vector(self):
        with pytest.raises(ValueError):
            schauder_coeffs(SampledPath(np.linspace(0, 1, 6), np.zeros(6)), 4)
        grid = np.linspace(0, 1, 5)
        with pytest.raises(ValueError):
            schauder_coeffs(SampledPath(grid, np.zeros((5, 2))), 4)
        with pytest.raises(ValueError):
            schauder_coeffs(SampledPath(grid, grid + 1.0), 4)


class TestProjectionMetric:
    def test_identical_paths(self):
        grid = np.linspace(0.0, 1.0, 17)
        x = SampledPath(grid, np.sin(grid))
        assert projection_metric(x, x, 8) == 0.0

    def test_single_basis_difference(self):
        grid = np.linspace(0.0, 1.0, 33)
        x = SampledPath(grid, np.zeros(33))
        y = SampledPath(grid, -linear_basis_path(grid).values)
        assert projection_metric(x, y, 4) == pytest.approx(1.0, abs=1e-12)

    def test_monotone_and_convergent(self):
        gen = np.random.default_rng(31)
        grid = np.linspace(0.0, 1.0, 129)
        for _ in range(10):
            diff = np.concatenate([[0.0], np.cumsum(gen.normal(size=128) * 0.05)])
            x = SampledPath(grid, diff)
            zero = SampledPath(grid, np.zeros(129))
            sweep = [projection_metric(x, zero, nb) for nb in (1, 2, 4, 8, 16, 32, 64, 128)]
            assert all(b >= a - 1e-13 for a, b in zip(sweep, sweep[1:]))
            assert sweep[-1] == pytest.approx(cm_norm(x), abs=1e-10)

    def test_shift_contraction(self):
        # d_n(x + h, x) never exceeds the Cameron-Martin norm of h
        gen = np.random.default_rng(32)
        grid = np.linspace(0.0, 1.0, 65)
        for _ in range(25):
            x = SampledPath(grid, np.concatenate([[0.0], gen.normal(size=64)]))
            h = SampledPath(grid, np.concatenate([[0.0], np.cumsum(gen.normal(size=64) * 0.1)]))
            shifted = x + h
            bound = cm_norm(h)
            for nb in (1, 4, 16, 64):
                assert projection_metric(shifted, x, nb) <= bound + 1e-10

    def test_sup_norm_bound_with_functional_norms(self):
        gen = np.random.default_rng(33)
        grid = np.linspace(0.0, 1.0, 65)
        for _ in range(25):
            xv = np.concatenate([[0.0], gen.normal(size=64)])
            yv = np.concatenate([[0.0], gen.normal(size=64)])
            x, y = SampledPath(grid, xv), SampledPath(grid, yv)
            for nb in (2, 8, 32):
                norms = schauder_functional_norms(nb, 1.0)
                bound = np.sqrt(np.sum(norms**2)) * sup_distance(x, y)
                assert projection_metric(x, y, nb) <= bound + 1e-10

    def test_cap_at_n_basis(self):
        grid = np.linspace(0.0, 1.0, 33)
        huge = SampledPath(grid, 100.0 * grid)
        zero = SampledPath(grid, np.zeros(33))
        assert projection_metric(huge, zero, 3) == 3.0

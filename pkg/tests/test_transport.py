import io
import math

import numpy as np
import pytest
from scipy.integrate import quad

from roughlab import (
    EmpiricalMeasure,
    GaussianSpec,
    GroundCost,
    LipschitzMap,
    SampledPath,
    SeededRng,
    VectorFieldSpec,
    chen_lift,
    empirical_wasserstein,
    gaussian_kl,
    gaussian_w2,
    measure_from_vectors,
    metric_axioms_check,
    p_variation,
    pushforward_check,
    sample_paths,
    sample_vectors,
    t2_check_finite_dim,
    t2_shift_experiment_path,
    wasserstein_bruteforce,
    write_cost_matrix_csv,
)

EUCLID = GroundCost("euclidean")


class TestEmpiricalWasserstein:
    def test_identical_sets_zero(self):
        pts = np.random.default_rng(0).normal(size=(10, 3))
        mu = measure_from_vectors(pts)
        assert empirical_wasserstein(mu, mu, EUCLID, 2.0) == 0.0

    def test_point_masses(self):
        mu = measure_from_vectors([[0.0, 0.0]])
        nu = measure_from_vectors([[3.0, 4.0]])
        assert empirical_wasserstein(mu, nu, EUCLID, 1.0) == pytest.approx(5.0)

    def test_two_point_shift(self):
        mu = measure_from_vectors([[0.0], [1.0]])
        nu = measure_from_vectors([[1.0], [2.0]])
        # brute force over both pairings: the sorted matching costs 1 each
        assert wasserstein_bruteforce(mu, nu, EUCLID, 1.0) == pytest.approx(1.0)
        assert empirical_wasserstein(mu, nu, EUCLID, 1.0) == pytest.approx(1.0)

    @pytest.mark.parametrize("p", [1.0, 2.0])
    def test_matches_bruteforce(self, p):
        gen = np.random.default_rng(1)
        for _ in range(200):
            n = int(gen.integers(1, 8))
            mu = measure_from_vectors(gen.normal(size=(n, 2)))
            nu = measure_from_vectors(gen.normal(size=(n, 2)))
            fast = empirical_wasserstein(mu, nu, EUCLID, p)
            slow = wasserstein_bruteforce(mu, nu, EUCLID, p)
            assert abs(fast - slow) <= 1e-12

    def test_sorted_coupling_optimal_in_1d(self):
        gen = np.random.default_rng(2)
        for _ in range(50):
            a = gen.normal(size=6)
            b = gen.normal(size=6)
            value = empirical_wasserstein(
                measure_from_vectors(a), measure_from_vectors(b), EUCLID, 2.0
            )
            sorted_cost = (np.mean((np.sort(a) - np.sort(b)) ** 2)) ** 0.5
            assert value == pytest.approx(sorted_cost, abs=1e-12)

    def test_infinite_row_gives_infinity(self):
        class OneInfRow(GroundCost):
            def __init__(self):
                super().__init__("euclidean")

            def matrix(self, a, b):
                out = super().matrix(a, b)
                out[0, :] = np.inf
                return out

        gen = np.random.default_rng(3)
        mu = measure_from_vectors(gen.normal(size=(5, 2)))
        nu = measure_from_vectors(gen.normal(size=(5, 2)))
        cost = OneInfRow()
        assert empirical_wasserstein(mu, nu, cost, 2.0) == math.inf
        assert wasserstein_bruteforce(mu, nu, cost, 2.0) == math.inf

    def test_partial_infinities_avoided_when_possible(self):
        class DiagonalInf(GroundCost):
            def __init__(self):
                super().__init__("euclidean")

            def matrix(self, a, b):
                out = super().matrix(a, b)
                np.fill_diagonal(out, np.inf)
                return out

        gen = np.random.default_rng(4)
        mu = measure_from_vectors(gen.normal(size=(4, 2)))
        nu = measure_from_vectors(gen.normal(size=(4, 2)))
        value = empirical_wasserstein(mu, nu, DiagonalInf(), 1.0)
        assert math.isfinite(value)
        assert value == pytest.approx(wasserstein_bruteforce(mu, nu, DiagonalInf(), 1.0), abs=1e-12)

    def test_size_contracts(self):
        mu = measure_from_vectors(np.zeros((3, 1)))
        nu = measure_from_vectors(np.zeros((4, 1)))
        with pytest.raises(ValueError):
            empirical_wasserstein(mu, nu, EUCLID, 2.0)
        big = measure_from_vectors(np.zeros((9, 1)))
        with pytest.raises(ValueError):
            wasserstein_bruteforce(big, big, EUCLID, 2.0)

    def test_path_points_with_variation_cost(self):
        spec = GaussianSpec.brownian(n=17, dim=1)
        grid = spec.grid()
        batch = sample_paths(spec, SeededRng(5, 0), 6)
        mu = EmpiricalMeasure(tuple(SampledPath(grid, b) for b in batch[:3]))
        nu = EmpiricalMeasure(tuple(SampledPath(grid, b) for b in batch[3:]))
        cost = GroundCost("pvar", p=2.5)
        value = empirical_wasserstein(mu, nu, cost, 2.0)
        assert math.isfinite(value) and value > 0


class TestGaussianClosedForms:
    def test_w2_identical(self):
        spec = GaussianSpec.finite_dim([1.0, -2.0], [[2.0, 0.3], [0.3, 1.0]])
        # eigendecomposition cancellation leaves ~1e-8 noise on exact zero
        assert gaussian_w2(spec, spec) == pytest.approx(0.0, abs=1e-7)

    def test_w2_mean_shift(self):
        m = np.array([0.6, -1.1, 0.3])
        a = GaussianSpec.finite_dim(m, np.eye(3))
        b = GaussianSpec.finite_dim(np.zeros(3), np.eye(3))
        assert gaussian_w2(a, b) == pytest.approx(np.linalg.norm(m), abs=1e-12)

    def test_w2_one_dimensional_scales(self):
        a = GaussianSpec.finite_dim([0.0], [[4.0]])
        b = GaussianSpec.finite_dim([0.0], [[1.0]])
        assert gaussian_w2(a, b) == pytest.approx(1.0, abs=1e-12)

    def test_kl_identical(self):
        spec = GaussianSpec.finite_dim([1.0], [[2.0]])
        assert gaussian_kl(spec, spec) == pytest.approx(0.0, abs=1e-12)

    def test_kl_mean_shift_vs_monte_carlo(self):
        # oracle: average of the log-density ratio over 10^6 draws of nu
        m = np.array([0.7, -0.4])
        nu = GaussianSpec.finite_dim(m, np.eye(2))
        mu = GaussianSpec.finite_dim(np.zeros(2), np.eye(2))
        closed = gaussian_kl(nu, mu)
        assert closed == pytest.approx(np.sum(m**2) / 2.0, abs=1e-12)
        draws = sample_vectors(nu, SeededRng(6, 0), 1_000_000)
        # log dnu/dmu at x is (|x|^2 - |x-m|^2) / 2
        log_ratio = 0.5 * (np.sum(draws**2, axis=1) - np.sum((draws - m) ** 2, axis=1))
        est = float(np.mean(log_ratio))
        se = float(np.std(log_ratio) / math.sqrt(draws.shape[0]))
        assert abs(est - closed) <= 3.0 * se

    def test_kl_variance_vs_quadrature(self):
        sig2 = 2.3
        nu = GaussianSpec.finite_dim([0.0], [[sig2]])
        mu = GaussianSpec.finite_dim([0.0], [[1.0]])
        closed = gaussian_kl(nu, mu)

        def integrand(x):
            log_nu = -0.5 * x * x / sig2 - 0.5 * math.log(2 * math.pi * sig2)
            log_mu = -0.5 * x * x - 0.5 * math.log(2 * math.pi)
            return math.exp(log_nu) * (log_nu - log_mu)

        oracle, _ = quad(integrand, -30.0, 30.0)
        assert closed == pytest.approx(oracle, abs=1e-9)
        assert closed == pytest.approx(0.5 * (sig2 - 1.0 - math.log(sig2)), abs=1e-12)

    def test_kl_singular_reference_infinite(self):
        nu = GaussianSpec.finite_dim([0.0, 0.0], np.eye(2))
        mu = GaussianSpec.finite_dim([0.0, 0.0], np.diag([1.0, 0.0]))
        assert gaussian_kl(nu, mu) == math.inf

    def test_kl_degenerate_first_argument_infinite(self):
        nu = GaussianSpec.finite_dim([0.0, 0.0], np.diag([1.0, 0.0]))
        mu = GaussianSpec.finite_dim([0.0, 0.0], np.eye(2))
        assert gaussian_kl(nu, mu) == math.inf


class TestQuadraticTransportCheck:
    def test_equal_laws(self):
        spec = GaussianSpec.finite_dim([0.3], [[1.5]])
        chk = t2_check_finite_dim(spec, spec, 2.0)
        assert chk.holds and chk.lhs == pytest.approx(0.0, abs=1e-9)

    @pytest.mark.parametrize("k", [1, 2, 5, 20])
    def test_equality_at_shifts(self, k):
        gen = np.random.default_rng(k)
        mu = GaussianSpec.finite_dim(np.zeros(k), np.eye(k))
        for _ in range(25):
            m = gen.normal(size=k)
            nu = GaussianSpec.finite_dim(m, np.eye(k))
            chk = t2_check_finite_dim(nu, mu, 2.0)
            assert chk.holds
            assert abs(chk.equality_gap) <= 1e-9

    def test_strict_inequality_for_inflation(self):
        mu = GaussianSpec.finite_dim(np.zeros(3), np.eye(3))
        nu = GaussianSpec.finite_dim(np.zeros(3), 2.0 * np.eye(3))
        chk = t2_check_finite_dim(nu, mu, 2.0)
        assert chk.holds and chk.equality_gap > 1e-3

    def test_random_pairs_never_violate(self):
        gen = np.random.default_rng(8)
        for _ in range(200):
            k = int(gen.integers(1, 8))
            base = gen.normal(size=(k, k)) / math.sqrt(k)
            cov_nu = base @ base.T + np.eye(k) * gen.uniform(0.05, 0.5)
            base2 = gen.normal(size=(k, k)) / math.sqrt(k)
            cov_mu = base2 @ base2.T + np.eye(k) * gen.uniform(0.2, 1.0)
            nu = GaussianSpec.finite_dim(gen.normal(size=k), cov_nu)
            mu = GaussianSpec.finite_dim(np.zeros(k), cov_mu)
            assert t2_check_finite_dim(nu, mu, 2.0).holds

    def test_nonstandard_reference_whitening(self):
        # shifts of a correlated reference achieve equality as well: the
        # whitened problem is again a standard-normal shift
        cov = np.array([[2.0, 0.7], [0.7, 1.0]])
        mu = GaussianSpec.finite_dim(np.zeros(2), cov)
        nu = GaussianSpec.finite_dim(np.array([0.8, -0.6]), cov)
        chk = t2_check_finite_dim(nu, mu, 2.0)
        assert abs(chk.equality_gap) <= 1e-9


class TestShiftExperiment:
    def test_zero_shift(self):
        spec = GaussianSpec.brownian(n=65)
        h = SampledPath(spec.grid(), np.zeros(65))
        rep = t2_shift_experiment_path(spec, h, None, 2.5, 0.1, trials=3, seed=0)
        assert rep.lhs == 0.0 and rep.implied_c == 0.0

    def test_identity_map_deterministic(self):
        spec = GaussianSpec.brownian(n=65)
        grid = spec.grid()
        tent = SampledPath(grid, np.minimum(grid, 1.0 - grid))
        rep = t2_shift_experiment_path(spec, tent, None, 2.5, 0.1, trials=4, seed=0)
        assert rep.lhs == pytest.approx(p_variation(tent, 2.5), abs=1e-12)
        assert rep.entropy == pytest.approx(0.5, abs=1e-12)

    def test_contractive_flow_implied_constant_stable(self):
        spec = GaussianSpec.brownian(n=129)
        grid = spec.grid()
        tent = np.minimum(grid, 1.0 - grid)
        flow = VectorFieldSpec.contractive(-1.0, 1)
        implied = []
        for scale in (0.25, 1.0, 4.0):
            h = SampledPath(grid, scale * tent)
            rep = t2_shift_experiment_path(spec, h, flow, 2.5, 0.1, trials=20, seed=2)
            implied.append(rep.implied_c)
        assert max(implied) <= 4.0 * min(implied)

    def test_rough_flow_dispatch(self):
        spec = GaussianSpec.brownian(n=65, dim=2)
        grid = spec.grid()
        h = SampledPath(grid, 0.3 * np.column_stack([np.sin(np.pi * grid), grid**2]))
        fields = VectorFieldSpec.tanh_fields([np.eye(2), 0.4 * np.eye(2)])
        rep = t2_shift_experiment_path(
            spec, h, fields, 2.5, 0.1, trials=5, seed=3, xi=np.array([0.5, -0.2])
        )
        assert math.isfinite(rep.lhs) and rep.lhs > 0

    def test_requires_brownian(self):
        spec = GaussianSpec.fbm(0.7, n=65)
        h = SampledPath(spec.grid(), np.zeros(65))
        with pytest.raises(ValueError):
            t2_shift_experiment_path(spec, h, None, 2.5, 0.1, trials=2)


class TestPushforward:
    def test_scaled_identity_equality_closed_form(self):
        # pushing N(m, 1) and N(0, 1) through 2 id doubles both sides
        for m in (0.5, 1.0, 2.0):
            nu = GaussianSpec.finite_dim([2.0 * m], [[4.0]])
            mu = GaussianSpec.finite_dim([0.0], [[4.0]])
            lhs = gaussian_w2(nu, mu)
            entropy = gaussian_kl(
                GaussianSpec.finite_dim([m], [[1.0]]), GaussianSpec.finite_dim([0.0], [[1.0]])
            )
            rhs = 2.0 * math.sqrt(2.0 * entropy)
            assert lhs == pytest.approx(2.0 * m, abs=1e-12)
            assert rhs == pytest.approx(2.0 * m, abs=1e-12)

    @pytest.mark.parametrize("kind,factor", [("identity", 1.0), ("scale", 2.0), ("tanh", 1.0)])
    def test_empirical_check_holds(self, kind, factor):
        mu = GaussianSpec.finite_dim(np.zeros(2), np.eye(2))
        rep = pushforward_check(mu, LipschitzMap(kind, factor), 2.0, trials=3, n=1000, seed=11)
        assert rep.all_hold


class TestMetricAxioms:
    def test_identical_measures_all_zero(self):
        pts = np.tile(np.random.default_rng(12).normal(size=(5, 2)), (3, 1))
        rep = metric_axioms_check(pts, EUCLID, 2.0)
        assert rep.all_hold
        assert rep.checks[0][1] == 0.0

    def test_euclidean_random_triples(self):
        gen = np.random.default_rng(13)
        for _ in range(25):
            rep = metric_axioms_check(gen.normal(size=(150, 3)), EUCLID, 2.0)
            assert rep.all_hold

    def test_rough_path_ground_cost(self):
        spec = GaussianSpec.brownian(n=21, dim=1)
        grid = spec.grid()
        batch = sample_paths(spec, SeededRng(14, 0), 60)
        lifts = tuple(chen_lift(SampledPath(grid, b)) for b in batch)
        rep = metric_axioms_check(lifts, GroundCost("pvar", p=2.5), 2.0)
        assert rep.all_hold

    def test_variation_cost_on_brownian_paths(self):
        # three groups of 20 Brownian paths under the p-variation ground cost
        spec = GaussianSpec.brownian(n=33, dim=1)
        grid = spec.grid()
        batch = sample_paths(spec, SeededRng(15, 0), 60)
        paths = tuple(SampledPath(grid, b) for b in batch)
        rep = metric_axioms_check(paths, GroundCost("pvar", p=2.5), 2.0)
        assert rep.all_hold

    def test_needs_three_groups(self):
        with pytest.raises(ValueError):
            metric_axioms_check(np.zeros((2, 1)), EUCLID, 2.0)


def test_cost_matrix_dump():
    gen = np.random.default_rng(19)
    mu = measure_from_vectors(gen.normal(size=(3, 2)))
    nu = measure_from_vectors(gen.normal(size=(4, 2)))
    buf = io.StringIO()
    write_cost_matrix_csv(mu, nu, EUCLID, buf)
    lines = buf.getvalue().splitlines()
    assert lines[0] == "c1,c2,c3,c4"
    dumped = np.loadtxt(io.StringIO("\n".join(lines[1:])), delimiter=",")
    assert np.array_equal(dumped, EUCLID.matrix(mu.points, nu.points))

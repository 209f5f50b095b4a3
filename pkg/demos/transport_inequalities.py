"""Exact Wasserstein distances and the quadratic transport inequalities.

Run:  python3 demos/transport_inequalities.py
"""
import numpy as np

from roughlab import (
    GaussianSpec,
    GroundCost,
    LipschitzMap,
    SampledPath,
    SeededRng,
    VectorFieldSpec,
    empirical_wasserstein,
    gaussian_kl,
    gaussian_w2,
    measure_from_vectors,
    metric_axioms_check,
    pushforward_check,
    sample_vectors,
    t2_check_finite_dim,
    t2_shift_experiment_path,
    wasserstein_bruteforce,
)

# --- assignment solver vs the n! oracle ------------------------------------
gen = np.random.default_rng(0)
mu = measure_from_vectors(gen.normal(size=(6, 2)))
nu = measure_from_vectors(gen.normal(size=(6, 2)))
cost = GroundCost("euclidean")
print(f"n=6 instance: assignment {empirical_wasserstein(mu, nu, cost, 2.0):.10f}")
print(f"              brute force {wasserstein_bruteforce(mu, nu, cost, 2.0):.10f}")

# --- sharp equality at Gaussian mean shifts ---------------------------------
print("\nquadratic transport check, nu = N(m, I) vs mu = N(0, I):")
print("   k    |m|        lhs        rhs        gap")
for k in (1, 2, 5, 20):
    m = gen.normal(size=k) * 0.8
    chk = t2_check_finite_dim(
        GaussianSpec.finite_dim(m, np.eye(k)), GaussianSpec.finite_dim(np.zeros(k), np.eye(k)), 2.0
    )
    print(f"  {k:2d}  {np.linalg.norm(m):7.4f}  {chk.lhs:9.6f}  {chk.rhs:9.6f}  {chk.equality_gap:+.1e}")

# --- empirical W2 at n = 2000 approaches the closed form --------------------
m = np.array([1.0, 0.0])
a = sample_vectors(GaussianSpec.finite_dim(m, np.eye(2)), SeededRng(5, 1), 2000)
b = sample_vectors(GaussianSpec.finite_dim(np.zeros(2), np.eye(2)), SeededRng(5, 2), 2000)
emp = empirical_wasserstein(measure_from_vectors(a), measure_from_vectors(b), cost, 2.0)
print(f"\nempirical W2 between 2000-point clouds of N(m, I), N(0, I): {emp:.4f}  (|m| = 1)")

# --- entropy side in closed form --------------------------------------------
nu = GaussianSpec.finite_dim([0.0], [[2.3]])
ref = GaussianSpec.finite_dim([0.0], [[1.0]])
print(f"relative entropy N(0, 2.3) || N(0, 1): {gaussian_kl(nu, ref):.6f}")
print(f"W2 between them:                        {gaussian_w2(nu, ref):.6f}")

# --- path-space shift experiment with a contracting flow --------------------
spec = GaussianSpec.brownian(horizon=1.0, n=257, dim=1)
grid = spec.grid()
tent = np.minimum(grid, 1.0 - grid)
flow = VectorFieldSpec.contractive(-1.0, 1)
print("\nsynchronous-coupling shift experiment, contracting flow:")
for scale in (0.25, 1.0, 4.0):
    rep = t2_shift_experiment_path(spec, SampledPath(grid, scale * tent), flow, 2.5, 0.1, trials=30, seed=4)
    print(f"  shift scale {scale:4.2f}: lhs {rep.lhs:.4f}  entropy {rep.entropy:.4f}  implied C {rep.implied_c:.4f}")

# --- Lipschitz pushforwards keep the inequality -----------------------------
report = pushforward_check(
    GaussianSpec.finite_dim(np.zeros(2), np.eye(2)), LipschitzMap("tanh"), 2.0, trials=3, n=800, seed=9
)
print("\npushforward through componentwise tanh (L = 1):")
for trial in report.trials:
    print(f"  empirical lhs {trial.lhs:.4f} <= {trial.rhs:.4f} + 3 x {trial.stderr:.4f}")

# --- the induced distance on empirical measures is a pseudometric -----------
rep = metric_axioms_check(gen.normal(size=(90, 3)), cost, 2.0)
for name, lhs, rhs, ok in rep.checks:
    print(f"metric axiom {name:9s}: {lhs:.4f} vs {rhs:.4f} -> {'ok' if ok else 'violated'}")

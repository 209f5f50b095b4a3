"""Monte Carlo tail fits: known laws, Brownian functionals, concentration.

Run:  python3 demos/tail_estimates.py
"""
import numpy as np

from roughlab import (
    GaussianSpec,
    brownian_running_max_survival,
    empirical_concentration_experiment,
    fernique_check,
    n1_tail_experiment,
    tail_fit,
)

# --- the fit recovers known Gaussian scales and rejects impostors ----------
gen = np.random.default_rng(1)
print("tail_fit on known laws (100k samples each):")
for label, data in (
    ("|N(0, 2)|", np.abs(gen.normal(0.0, np.sqrt(2.0), 100_000))),
    ("exponential", gen.exponential(1.0, 100_000)),
    ("uniform[0,1]", gen.uniform(0.0, 1.0, 100_000)),
):
    fit = tail_fit(data)
    print(f"  {label:12s} -> {fit.verdict:26s} sigma2 = {fit.sigma2:7.3f}  R2 = {fit.r2:.3f}")

# --- running maximum of Brownian motion vs the reflection principle --------
spec = GaussianSpec.brownian(horizon=1.0, n=512, dim=1)
rep = fernique_check(spec, "running_max", trials=100_000, seed=3)
print(
    f"\nBrownian running max: verdict {rep.fit.verdict}, fitted sigma2 {rep.fit.sigma2:.3f}"
    f" (reflection law slope gives 1)"
)
print(f"  exact tail at r = 2: {brownian_running_max_survival(2.0):.5f}")

# --- norms of the lift have Gaussian tails too ------------------------------
spec2 = GaussianSpec.brownian(horizon=1.0, n=128, dim=2)
rep2 = fernique_check(spec2, "homog_lift", trials=10_000, p=2.5, seed=6)
print(f"degree-one lift norm:  verdict {rep2.fit.verdict}, R2 {rep2.fit.r2:.3f}")

# --- greedy accumulation counts: integer-valued yet Gaussian-tailed ---------
rep3 = n1_tail_experiment(spec2, 2.5, trials=10_000, seed=7)
print(
    f"accumulation counts:   verdict {rep3.fit.verdict}, mean {rep3.mean_count:.2f},"
    f" R2 {rep3.fit.r2:.3f}"
)

# --- empirical measures concentrate around their Gaussian law ---------------
spec_fd = GaussianSpec.finite_dim(np.zeros(2), np.eye(2))
conc = empirical_concentration_experiment(spec_fd, [16, 64, 256], trials=200, seed=21)
print("\nempirical-measure concentration (k = 2):")
for row in conc.rows:
    print(f"  n = {row.n:3d}: median W2 = {row.median:.4f}, exceedance bound holds: {row.holds}")
print(f"  medians decreasing: {conc.medians_decreasing}")

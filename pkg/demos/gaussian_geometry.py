"""Gaussian process sampling and the Cameron-Martin projection metrics.

Run:  python3 demos/gaussian_geometry.py
"""
import numpy as np

from roughlab import (
    GaussianSpec,
    SampledPath,
    SeededRng,
    cm_norm,
    fbm_covariance,
    projection_metric,
    sample_path,
    schauder_coeffs,
)

# --- one draw of each process kind ----------------------------------------
for spec in (
    GaussianSpec.brownian(n=9),
    GaussianSpec.fbm(0.3, n=9),
    GaussianSpec.fbm(0.7, n=9),
    GaussianSpec.ornstein_uhlenbeck(theta=2.0, sigma=1.0, n=9),
    GaussianSpec.bridge(n=9),
):
    path = sample_path(spec, SeededRng(42, 0))
    label = spec.kind + (f"(H={spec.hurst})" if spec.hurst else "")
    with np.printoptions(precision=3, suppress=True):
        print(f"{label:12s} {path.values[:, 0]}")

# --- fractional Brownian covariance reduces to min(s,t) at H = 1/2 --------
t = np.linspace(0.0, 1.0, 6)[1:]
gap = np.max(np.abs(fbm_covariance(t, 0.5) - np.minimum.outer(t, t)))
print(f"\n|fBm covariance at H=0.5  -  min(s,t)| = {gap:.2e}")

# --- Cameron-Martin energies of simple shifts ------------------------------
grid = np.linspace(0.0, 1.0, 129)
print("\nCameron-Martin norms:")
print(f"  slope-one line : {cm_norm(SampledPath(grid, grid)):.4f}")
tent = np.minimum(grid, 1.0 - grid)
print(f"  unit tent      : {cm_norm(SampledPath(grid, tent)):.4f}")

# --- Schauder coefficients pick out the basis ------------------------------
e1 = SampledPath(grid, grid)  # = t / sqrt(T) with T = 1
coeffs = schauder_coeffs(e1, 6)
with np.printoptions(precision=4, suppress=True):
    print(f"\nSchauder coefficients of the line: {coeffs}")

# --- the projection pseudometrics climb to the full CM norm ---------------
smooth = SampledPath(grid, np.sin(np.pi * grid) + 0.4 * np.sin(3 * np.pi * grid))
zero = SampledPath(grid, np.zeros(129))
print(f"\nsmooth h with |h|_CM = {cm_norm(smooth):.4f}")
for nb in (1, 2, 4, 8, 16, 32, 64, 128):
    print(f"  d_{nb:<3d} = {projection_metric(smooth, zero, nb):.4f}")
print("  (nondecreasing, exact at full dyadic resolution)")

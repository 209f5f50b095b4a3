"""Walk through the deterministic path norms on a few concrete paths.

Run:  python3 demos/path_norms.py
"""
import numpy as np

from roughlab import (
    SampledPath,
    SobolevParams,
    control_eval,
    p_variation,
    p_variation_bruteforce,
    sobolev_norm,
    sup_distance,
)

# --- p-variation of a zigzag: the partition supremum switches winners -----
zigzag = SampledPath([0.0, 0.5, 1.0], [0.0, 1.0, 0.0])
print("zigzag path 0 -> 1 -> 0")
for p in (1.0, 1.5, 2.0, 3.0):
    dp = p_variation(zigzag, p)
    brute = p_variation_bruteforce(zigzag, p)
    print(f"  p={p:3.1f}:  dynamic program {dp:.6f}   enumeration {brute:.6f}")
print("  (p=1 keeps both segments, larger p favors the single jump of size 1)")

# --- random paths: the DP matches exhaustive enumeration ------------------
gen = np.random.default_rng(7)
worst = 0.0
for _ in range(200):
    n = int(gen.integers(2, 11))
    times = np.unique(np.concatenate([[0.0], np.sort(gen.uniform(0.05, 1.0, n - 1))]))
    path = SampledPath(times, gen.normal(size=(len(times), 2)))
    for p in (1.0, 2.0, 2.5):
        worst = max(worst, abs(p_variation(path, p) - p_variation_bruteforce(path, p)))
print(f"\n200 random paths, p in {{1, 2, 2.5}}: max |DP - enumeration| = {worst:.2e}")

# --- the control function w(s,t) = pvar^p is superadditive ----------------
times = np.linspace(0.0, 1.0, 9)
path = SampledPath(times, gen.normal(size=(9, 2)))
total = control_eval(path, 2.5, 0, 8)
splits = [control_eval(path, 2.5, 0, u) + control_eval(path, 2.5, u, 8) for u in range(1, 8)]
print(f"\ncontrol over [0,T]: {total:.4f}; largest split sum {max(splits):.4f} (never above)")

# --- sup distance is dominated by the p-variation of the difference -------
x = SampledPath(times, np.concatenate([[0.0], np.cumsum(gen.normal(size=8) * 0.3)]))
y = SampledPath(times, np.concatenate([[0.0], np.cumsum(gen.normal(size=8) * 0.3)]))
print(f"\nsup|x - y| = {sup_distance(x, y):.4f} <= |x - y|_2-var = {p_variation(x - y, 2.0):.4f}")

# --- fractional Sobolev norm of the identity path vs closed form ----------
t = np.linspace(0.0, 1.0, 513)
lin = SampledPath(t, t)
closed = (1.0 / 3.0) ** 0.5 + (2.0 / (0.4 * 1.4)) ** 0.5
value = sobolev_norm(lin, SobolevParams(0.8, 2.0))
print(f"\n|t|_W(0.8,2) on 513 points: {value:.6f}  (closed form {closed:.6f})")

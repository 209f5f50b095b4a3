"""Sampled paths and the deterministic path norms built on them.

A path is a matrix of samples on a strictly increasing time grid and is
interpreted everywhere as its piecewise-linear interpolant.  For that path
class the supremum over all real partitions defining the p-variation is
attained on grid partitions (refining inside a straight segment never
increases the sum for p >= 1), so the dynamic programs below are exact,
not approximations.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._kernels import pvar_dp_pow


@dataclass(frozen=True)
class SampledPath:
    """A d-dimensional path sampled on a strictly increasing time grid.

    ``times`` has shape (n,), ``values`` shape (n, d); scalar input values
    are promoted to a single column.  Instances are immutable; the arrays
    are copied and marked read-only.
    """

    times: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        t = np.asarray(self.times, dtype=float).copy()
        v = np.asarray(self.values, dtype=float).copy()
        if v.ndim == 1:
            v = v[:, None]
        if t.ndim != 1 or v.ndim != 2:
            raise ValueError("times must be 1-d and values (n, d)")
        if t.shape[0] != v.shape[0]:
            raise ValueError("times and values must have the same length")
        if t.shape[0] < 1 or v.shape[1] < 1:
            raise ValueError("need n >= 1 grid points and d >= 1 components")
        if t.shape[0] > 1 and not np.all(np.diff(t) > 0):
            raise ValueError("times must be strictly increasing")
        if not (np.all(np.isfinite(t)) and np.all(np.isfinite(v))):
            raise ValueError("times and values must be finite")
        t.setflags(write=False)
        v.setflags(write=False)
        object.__setattr__(self, "times", t)
        object.__setattr__(self, "values", v)

    @property
    def n(self) -> int:
        return self.times.shape[0]

    @property
    def d(self) -> int:
        return self.values.shape[1]

    @property
    def horizon(self) -> float:
        return float(self.times[-1])

    def increments(self) -> np.ndarray:
        """Per-segment increments, shape (n-1, d)."""
        return np.diff(self.values, axis=0)

    def same_grid(self, other: "SampledPath") -> bool:
        return self.times.shape == other.times.shape and np.array_equal(
            self.times, other.times
        )

    def _binary(self, other, op):
        if not isinstance(other, SampledPath):
            return NotImplemented
        if not self.same_grid(other) or self.d != other.d:
            raise ValueError("paths live on different grids or dimensions")
        return SampledPath(self.times, op(self.values, other.values))

    def __add__(self, other):
        return self._binary(other, np.add)

    def __sub__(self, other):
        return self._binary(other, np.subtract)


@dataclass(frozen=True)
class Partition:
    """Indices of partition points into a path grid.

    The first and last index pin the endpoints of the subinterval the
    partition lives on; intermediate indices are free.
    """

    indices: np.ndarray

    def __post_init__(self):
        idx = np.asarray(self.indices, dtype=int).copy()
        if idx.ndim != 1 or idx.shape[0] < 1:
            raise ValueError("indices must be a nonempty 1-d integer sequence")
        if idx.shape[0] > 1 and not np.all(np.diff(idx) > 0):
            raise ValueError("indices must be strictly increasing")
        if idx[0] < 0:
            raise ValueError("indices must be nonnegative")
        idx.setflags(write=False)
        object.__setattr__(self, "indices", idx)

    def check_bounds(self, start: int, stop: int):
        if self.indices[0] != start or self.indices[-1] != stop:
            raise ValueError("partition endpoints must match the subinterval")


@dataclass(frozen=True)
class SobolevParams:
    """Fractional Sobolev parameters: smoothness delta in (0, 1], power p > 1."""

    delta: float
    p: float

    def __post_init__(self):
        if not 0.0 < self.delta <= 1.0:
            raise ValueError("delta must lie in (0, 1]")
        if not self.p > 1.0:
            raise ValueError("p must exceed 1")

    def require_embedding_regime(self):
        """Embedding experiments need delta * p > 1."""
        if self.delta * self.p <= 1.0:
            raise ValueError("embedding experiments need delta * p > 1")


def _resolve_sub(path: SampledPath, sub) -> tuple[int, int]:
    if sub is None:
        return 0, path.n - 1
    s, t = int(sub[0]), int(sub[1])
    if not (0 <= s <= t <= path.n - 1):
        raise ValueError(f"subinterval ({s}, {t}) out of bounds for n={path.n}")
    return s, t


def variation_sum(path: SampledPath, p: float, partition: Partition) -> float:
    """(sum of |increment|^p over the partition)^(1/p)."""
    idx = partition.indices
    inc = np.linalg.norm(np.diff(path.values[idx], axis=0), axis=1)
    return float(np.sum(inc**p) ** (1.0 / p)) if inc.size else 0.0


def p_variation(path: SampledPath, p: float, sub=None) -> float:
    """Exact p-variation seminorm of the path over a grid subinterval.

    Dynamic program V(i) = max_{j<i} V(j) + |x_i - x_j|^p with V(start) = 0;
    the answer is V(end)^(1/p).  For p = 1 the finest partition dominates by
    the triangle inequality and the sum of segment lengths is returned
    directly.
    """
    if not p >= 1.0:
        raise ValueError("p-variation needs p >= 1")
    s, t = _resolve_sub(path, sub)
    if s == t:
        return 0.0
    vals = path.values[s : t + 1]
    if p == 1.0:
        return float(np.sum(np.linalg.norm(np.diff(vals, axis=0), axis=1)))
    return float(pvar_dp_pow(np.ascontiguousarray(vals), p)) ** (1.0 / p)


_BRUTE_MAX_POINTS = 16


def p_variation_bruteforce(path: SampledPath, p: float, sub=None) -> float:
    """p-variation by exhaustive enumeration of all grid partitions.

    Test oracle: identical value to :func:`p_variation`, obtained by walking
    every one of the 2^(m-2) increasing index sequences.  Refuses more than
    16 points.
    """
    if not p >= 1.0:
        raise ValueError("p-variation needs p >= 1")
    s, t = _resolve_sub(path, sub)
    m = t - s + 1
    if m > _BRUTE_MAX_POINTS:
        raise ValueError(f"refusing brute force on {m} > {_BRUTE_MAX_POINTS} points")
    if m <= 1:
        return 0.0
    vals = path.values[s : t + 1]
    pow_dist = (np.linalg.norm(vals[None, :, :] - vals[:, None, :], axis=2) ** p).tolist()
    best = 0.0
    # Depth-first over increasing sequences 0 = a_0 < ... < a_k = m-1,
    # carrying the accumulated sum; every leaf closes the partition at m-1.
    stack = [(0, 0.0)]
    while stack:
        last, acc = stack.pop()
        row = pow_dist[last]
        closing = acc + row[m - 1]
        if closing > best:
            best = closing
        for nxt in range(last + 1, m - 1):
            stack.append((nxt, acc + row[nxt]))
    return best ** (1.0 / p)


def sup_distance(x: SampledPath, y: SampledPath) -> float:
    """Maximum over the grid of the Euclidean distance of the sample values."""
    if not x.same_grid(y) or x.d != y.d:
        raise ValueError("sup_distance needs identical grids and dimensions")
    return float(np.max(np.linalg.norm(x.values - y.values, axis=1)))


def sobolev_norm(path: SampledPath, params: SobolevParams) -> float:
    """Fractional Sobolev norm |h|_Lp + seminorm of the interpolant.

    The L^p part integrates |h(t)|^p by the trapezoid rule.  For delta = 1
    the seminorm uses the exact piecewise-constant derivative.  For
    delta < 1 the double integral of |h(v)-h(u)|^p / |v-u|^(1+delta*p) is
    summed cell by cell at cell midpoints; the singular diagonal cells are
    integrated in closed form for the linear interpolant (the integrand is
    |slope|^p |v-u|^(p-1-delta*p) there, which is integrable since
    delta < 1).
    """
    if path.n < 2:
        raise ValueError("sobolev_norm needs at least two grid points")
    delta, p = params.delta, params.p
    t = path.times
    v = path.values
    lp_part = float(np.trapezoid(np.linalg.norm(v, axis=1) ** p, t) ** (1.0 / p))

    dt = np.diff(t)
    dv = np.diff(v, axis=0)
    if delta == 1.0:
        slopes = np.linalg.norm(dv, axis=1) / dt
        semi = float(np.sum(slopes**p * dt) ** (1.0 / p))
        return lp_part + semi

    # midpoint values per cell
    tm = 0.5 * (t[:-1] + t[1:])
    vm = 0.5 * (v[:-1] + v[1:])
    sep = np.abs(tm[:, None] - tm[None, :])
    num = np.linalg.norm(vm[:, None, :] - vm[None, :, :], axis=2) ** p
    area = dt[:, None] * dt[None, :]
    off = ~np.eye(len(tm), dtype=bool)
    integral = float(np.sum(num[off] / sep[off] ** (1.0 + delta * p) * area[off]))

    # diagonal cells, exact for the linear interpolant
    beta = p - 1.0 - delta * p  # > -1 because delta < 1
    slopes = np.linalg.norm(dv, axis=1) / dt
    diag = np.sum(slopes**p * 2.0 * dt ** (beta + 2.0) / ((beta + 1.0) * (beta + 2.0)))
    integral += float(diag)
    return lp_part + integral ** (1.0 / p)


def control_eval(path: SampledPath, p: float, s_idx: int, t_idx: int) -> float:
    """Control function w(s,t) = p_variation(path, p, [s,t])^p.

    Superadditive over adjacent subintervals: w(s,u) + w(u,t) <= w(s,t).
    """
    if s_idx > t_idx:
        raise ValueError("need s_idx <= t_idx")
    return p_variation(path, p, (s_idx, t_idx)) ** p


def write_path_csv(path: SampledPath, file) -> None:
    """Write the path as CSV with header t,x1,...,xd at full precision."""
    header = "t," + ",".join(f"x{i + 1}" for i in range(path.d))
    data = np.column_stack([path.times, path.values])
    np.savetxt(file, data, delimiter=",", header=header, comments="", fmt="%.17g")


def read_path_csv(file) -> SampledPath:
    """Read a path written by :func:`write_path_csv`."""
    data = np.loadtxt(file, delimiter=",", skiprows=1, ndmin=2)
    return SampledPath(data[:, 0], data[:, 1:])

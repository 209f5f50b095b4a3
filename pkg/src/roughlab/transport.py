"""Wasserstein distances on empirical measures and the transport inequalities.

Equal-count uniform empirical measures make exact optimal transport an
assignment problem; the solver is scipy's Jonker-Volgenant implementation,
with an n! brute-force oracle next to it for small instances.  Gaussian
Wasserstein-2 and relative entropy come in closed form and drive the
equality/shift experiments.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.optimize import linear_sum_assignment
from scipy.spatial.distance import cdist

from .errors import NumericalError
from .flows import VectorFieldSpec, ode_additive_solve, rde_solve, shift_entropy
from .gaussian import (
    GaussianSpec,
    SeededRng,
    cm_norm,
    projection_metric,
    sample_paths,
    sample_vectors,
)
from .paths import SampledPath, p_variation, sup_distance
from .roughlift import RoughPath2, chen_lift, rho_pvar

_ASSIGNMENT_MAX_N = 4096
_BRUTE_MAX_N = 8


@dataclass(frozen=True)
class EmpiricalMeasure:
    """n equally weighted sample points: vectors, paths, or rough paths."""

    points: object

    def __post_init__(self):
        pts = self.points
        if isinstance(pts, np.ndarray):
            arr = np.asarray(pts, dtype=float)
            if arr.ndim == 1:
                arr = arr[:, None]
            if arr.ndim != 2 or arr.shape[0] < 1:
                raise ValueError("vector samples must form an (n, k) array")
            arr = arr.copy()
            arr.setflags(write=False)
            object.__setattr__(self, "points", arr)
        else:
            pts = tuple(pts)
            if len(pts) < 1:
                raise ValueError("need at least one sample point")
            kinds = {type(p) for p in pts}
            if len(kinds) != 1 or kinds.pop() not in (SampledPath, RoughPath2):
                raise ValueError("points must be homogeneous paths or rough paths")
            object.__setattr__(self, "points", pts)

    @property
    def size(self) -> int:
        return len(self.points)

    def subset(self, idx) -> "EmpiricalMeasure":
        if isinstance(self.points, np.ndarray):
            return EmpiricalMeasure(self.points[idx])
        return EmpiricalMeasure(tuple(self.points[i] for i in idx))


def measure_from_vectors(arr) -> EmpiricalMeasure:
    return EmpiricalMeasure(np.asarray(arr, dtype=float))


@dataclass(frozen=True)
class GroundCost:
    """Pluggable ground cost; every kind is a pseudometric on its point type.

    Kinds: ``euclidean`` (vectors), ``sup`` (paths), ``pvar`` (paths or
    rough paths, with parameter p), ``cm`` (Cameron-Martin norm of the
    difference of same-start paths), ``projection`` (finite-rank Schauder
    metric with parameter n_basis).
    """

    kind: str
    p: Optional[float] = None
    n_basis: Optional[int] = None

    def __post_init__(self):
        if self.kind not in ("euclidean", "sup", "pvar", "cm", "projection"):
            raise ValueError(f"unknown ground cost kind {self.kind!r}")
        if self.kind == "pvar" and (self.p is None or self.p < 1):
            raise ValueError("pvar cost needs p >= 1")
        if self.kind == "projection" and (self.n_basis is None or self.n_basis < 1):
            raise ValueError("projection cost needs n_basis >= 1")

    def pair(self, a, b) -> float:
        if self.kind == "euclidean":
            return float(np.linalg.norm(np.asarray(a) - np.asarray(b)))
        if self.kind == "sup":
            return sup_distance(a, b)
        if self.kind == "pvar":
            if isinstance(a, RoughPath2):
                return rho_pvar(a, b, self.p)
            return p_variation(a - b, self.p)
        if self.kind == "cm":
            return cm_norm(a - b)
        return projection_metric(a, b, self.n_basis)

    def matrix(self, pts_a, pts_b) -> np.ndarray:
        if self.kind == "euclidean":
            return cdist(np.asarray(pts_a, dtype=float), np.asarray(pts_b, dtype=float))
        out = np.empty((len(pts_a), len(pts_b)))
        for i, a in enumerate(pts_a):
            for j, b in enumerate(pts_b):
                out[i, j] = self.pair(a, b)
        return out


def write_cost_matrix_csv(
    mu: EmpiricalMeasure, nu: EmpiricalMeasure, cost: GroundCost, file
) -> None:
    """Dump the pairwise ground-cost matrix as CSV for audit."""
    matrix = cost.matrix(mu.points, nu.points)
    header = ",".join(f"c{j + 1}" for j in range(matrix.shape[1]))
    np.savetxt(file, matrix, delimiter=",", header=header, comments="", fmt="%.17g")


def _matched_total(cost_pow: np.ndarray, rows, cols) -> float:
    """Sum of matched entries in a canonical (sorted) order, so equal
    matchings produce bit-identical totals regardless of solver order."""
    matched = np.sort(cost_pow[rows, cols])
    return float(np.sum(matched))


def empirical_wasserstein(
    mu: EmpiricalMeasure, nu: EmpiricalMeasure, cost: GroundCost, p: float
) -> float:
    """Exact Wasserstein-p distance between equal-count uniform measures.

    Builds the matrix of cost^p and solves the linear assignment problem.
    Infinite costs ride through a large sentinel (10^3 times the largest
    finite entry); if the optimal matching uses any infinite edge the
    distance is +inf.
    """
    if p < 1:
        raise ValueError("need p >= 1")
    if mu.size != nu.size:
        raise ValueError("empirical measures must have equal sample counts")
    if mu.size > _ASSIGNMENT_MAX_N:
        raise ValueError(f"refusing assignment beyond n = {_ASSIGNMENT_MAX_N}")
    cost_pow = cost.matrix(mu.points, nu.points) ** p
    infinite = ~np.isfinite(cost_pow)
    if infinite.any():
        finite_max = float(cost_pow[~infinite].max(initial=0.0))
        sentinel = 1e3 * finite_max if finite_max > 0 else 1.0
        work = np.where(infinite, sentinel, cost_pow)
    else:
        work = cost_pow
    rows, cols = linear_sum_assignment(work)
    if infinite[rows, cols].any():
        return math.inf
    return (_matched_total(cost_pow, rows, cols) / mu.size) ** (1.0 / p)


def wasserstein_bruteforce(
    mu: EmpiricalMeasure, nu: EmpiricalMeasure, cost: GroundCost, p: float
) -> float:
    """Minimum over all n! pairings; test oracle for the assignment solver."""
    if p < 1:
        raise ValueError("need p >= 1")
    if mu.size != nu.size:
        raise ValueError("empirical measures must have equal sample counts")
    n = mu.size
    if n > _BRUTE_MAX_N:
        raise ValueError(f"refusing brute force beyond n = {_BRUTE_MAX_N}")
    cost_pow = cost.matrix(mu.points, nu.points) ** p
    rows = np.arange(n)
    best = math.inf
    best_perm = None
    for perm in itertools.permutations(range(n)):
        total = float(np.sum(cost_pow[rows, perm]))
        if total < best:
            best = total
            best_perm = perm
    if not math.isfinite(best):
        return math.inf
    return (_matched_total(cost_pow, rows, np.array(best_perm)) / n) ** (1.0 / p)


def _sqrtm_psd(mat: np.ndarray) -> np.ndarray:
    vals, vecs = np.linalg.eigh(0.5 * (mat + mat.T))
    vals = np.clip(vals, 0.0, None)
    return (vecs * np.sqrt(vals)) @ vecs.T


def gaussian_w2(spec1: GaussianSpec, spec2: GaussianSpec) -> float:
    """Closed-form Wasserstein-2 distance between finite-dimensional
    Gaussians (Euclidean ground metric)."""
    if spec1.kind != "finite_dim" or spec2.kind != "finite_dim":
        raise ValueError("gaussian_w2 needs finite-dimensional specs")
    if spec1.mean.size != spec2.mean.size:
        raise ValueError("dimension mismatch")
    try:
        root2 = _sqrtm_psd(spec2.cov)
        inner = root2 @ spec1.cov @ root2
        cross_vals = np.clip(np.linalg.eigvalsh(0.5 * (inner + inner.T)), 0.0, None)
    except np.linalg.LinAlgError as exc:
        raise NumericalError("eigendecomposition failed in gaussian_w2") from exc
    mean_part = float(np.sum((spec1.mean - spec2.mean) ** 2))
    trace_part = float(
        np.trace(spec1.cov) + np.trace(spec2.cov) - 2.0 * np.sum(np.sqrt(cross_vals))
    )
    return math.sqrt(max(mean_part + trace_part, 0.0))


def gaussian_kl(spec1: GaussianSpec, spec2: GaussianSpec) -> float:
    """Closed-form relative entropy of one finite-dimensional Gaussian with
    respect to another; +inf when the second covariance is singular or the
    first is degenerate."""
    if spec1.kind != "finite_dim" or spec2.kind != "finite_dim":
        raise ValueError("gaussian_kl needs finite-dimensional specs")
    k = spec1.mean.size
    if spec2.mean.size != k:
        raise ValueError("dimension mismatch")
    try:
        chol2 = np.linalg.cholesky(spec2.cov)
    except np.linalg.LinAlgError:
        return math.inf
    sign1, logdet1 = np.linalg.slogdet(spec1.cov)
    if sign1 <= 0:
        return math.inf
    logdet2 = 2.0 * float(np.sum(np.log(np.diag(chol2))))
    sol = np.linalg.solve(chol2, spec1.cov)
    trace_term = float(np.trace(np.linalg.solve(chol2, sol.T)))
    diff = spec2.mean - spec1.mean
    maha = float(np.sum(np.linalg.solve(chol2, diff) ** 2))
    return 0.5 * (trace_term + maha - k + logdet2 - float(logdet1))


@dataclass(frozen=True)
class TransportCheck:
    lhs: float
    rhs: float
    holds: bool
    equality_gap: float


def t2_check_finite_dim(
    spec_nu: GaussianSpec, spec_mu: GaussianSpec, C: float
) -> TransportCheck:
    """Quadratic transport inequality check in the reference measure's own
    geometry: whiten both laws by the inverse square root of the reference
    covariance (so the ground metric is its Cameron-Martin norm), then
    compare the closed-form W2 against sqrt(C * relative entropy)."""
    if spec_mu.kind != "finite_dim" or spec_nu.kind != "finite_dim":
        raise ValueError("needs finite-dimensional specs")
    vals, vecs = np.linalg.eigh(spec_mu.cov)
    if np.min(vals) <= 0:
        raise ValueError("reference covariance must be positive definite")
    whiten = (vecs / np.sqrt(vals)) @ vecs.T
    k = spec_mu.mean.size
    nu_w = GaussianSpec.finite_dim(
        whiten @ (spec_nu.mean - spec_mu.mean), whiten @ spec_nu.cov @ whiten.T
    )
    mu_w = GaussianSpec.finite_dim(np.zeros(k), np.eye(k))
    lhs = gaussian_w2(nu_w, mu_w)
    entropy = gaussian_kl(spec_nu, spec_mu)
    rhs = math.sqrt(C * entropy) if math.isfinite(entropy) else math.inf
    holds = lhs <= rhs * (1.0 + 1e-9)
    return TransportCheck(lhs=lhs, rhs=rhs, holds=holds, equality_gap=rhs - lhs)


@dataclass(frozen=True)
class ShiftPathReport:
    lhs: float
    entropy: float
    implied_c: float


def t2_shift_experiment_path(
    spec: GaussianSpec,
    h: SampledPath,
    flow: Optional[VectorFieldSpec],
    p: float,
    epsilon: float,
    trials: int,
    seed: int = 0,
    xi=None,
) -> ShiftPathReport:
    """Synchronous-coupling shift experiment on path space.

    Per trial a Brownian path x is drawn; the solution map (identity when no
    flow is given, the additive solver for drift-only presets, the rough
    solver otherwise) is applied to x and x + h and the p-variation distance
    of the outputs is averaged in the (2 - epsilon)-th mean.  The entropy
    side is the Cameron-Martin shift entropy |h|^2/2, exact for Brownian
    motion, and the report carries the implied constant lhs^2 / entropy.
    """
    if spec.kind != "brownian":
        raise ValueError("the shift experiment needs a Brownian spec")
    if not 0.0 < epsilon < 1.0:
        raise ValueError("epsilon must lie in (0, 1)")
    if trials < 1:
        raise ValueError("need at least one trial")
    grid = spec.grid()
    if h.n != spec.n or not np.array_equal(h.times, grid):
        raise ValueError("h must live on the spec's grid")

    def solution(x: SampledPath) -> SampledPath:
        if flow is None:
            return x
        state = np.zeros(flow.state_dim) if xi is None else np.asarray(xi, dtype=float)
        if flow.driver_dim >= 1:
            return rde_solve(chen_lift(x), flow, state)
        return ode_additive_solve(x, flow, state)

    power = 2.0 - epsilon
    acc = 0.0
    for trial in range(trials):
        x = SampledPath(grid, sample_paths(spec, SeededRng(seed, trial), 1)[0])
        y1 = solution(x)
        y2 = solution(x + h)
        acc += p_variation(y2 - y1, p) ** power
    lhs = (acc / trials) ** (1.0 / power)
    entropy = shift_entropy(h)
    implied = lhs**2 / entropy if entropy > 0 else 0.0
    return ShiftPathReport(lhs=lhs, entropy=entropy, implied_c=implied)


@dataclass(frozen=True)
class LipschitzMap:
    """Named Lipschitz map preset with its exact constant."""

    kind: str
    factor: float = 1.0

    def __post_init__(self):
        if self.kind not in ("identity", "scale", "tanh"):
            raise ValueError(f"unknown map kind {self.kind!r}")

    @property
    def lipschitz_L(self) -> float:
        if self.kind == "identity":
            return 1.0
        if self.kind == "scale":
            return abs(self.factor)
        return 1.0  # componentwise tanh

    def apply(self, pts: np.ndarray) -> np.ndarray:
        if self.kind == "identity":
            return pts
        if self.kind == "scale":
            return self.factor * pts
        return np.tanh(pts)


@dataclass(frozen=True)
class PushforwardTrial:
    lhs: float
    rhs: float
    stderr: float
    holds: bool


@dataclass(frozen=True)
class PushforwardReport:
    trials: tuple
    all_hold: bool


def _bootstrap_stderr(
    pushed_a: np.ndarray,
    pushed_b: np.ndarray,
    p: float,
    gen,
    replicates: int,
    subsample: int = 500,
) -> float:
    """Bootstrap standard error of the empirical distance, estimated on
    subsamples of size m and rescaled by sqrt(m/n) (root-n fluctuation
    scaling), which keeps the assignment solves cheap."""
    n = pushed_a.shape[0]
    m = min(subsample, n)
    vals = np.empty(replicates)
    for b in range(replicates):
        ia = gen.integers(0, n, size=m)
        ib = gen.integers(0, n, size=m)
        vals[b] = empirical_wasserstein(
            measure_from_vectors(pushed_a[ia]),
            measure_from_vectors(pushed_b[ib]),
            GroundCost("euclidean"),
            p,
        )
    return float(np.std(vals, ddof=1)) * math.sqrt(m / n)


def pushforward_check(
    spec_mu: GaussianSpec,
    lip_map: LipschitzMap,
    C: float,
    trials: int,
    n: int = 2000,
    seed: int = 0,
    bootstrap: int = 12,
) -> PushforwardReport:
    """Check that the transport inequality survives a Lipschitz pushforward.

    For a family of Gaussian perturbations nu of the reference law, the
    empirical W2 between pushed samples is compared with
    L * sqrt(C * H(nu|mu)), allowing three bootstrap standard errors of
    sampling slack on the empirical side.
    """
    if spec_mu.kind != "finite_dim":
        raise ValueError("pushforward check needs a finite-dimensional reference")
    k = spec_mu.mean.size
    out = []
    for trial in range(trials):
        gen = SeededRng(seed, trial).generator()
        shift = gen.normal(size=k) * 0.8
        scale = gen.uniform(0.6, 0.9) if gen.uniform() < 0.5 else gen.uniform(1.15, 1.5)
        spec_nu = GaussianSpec.finite_dim(spec_mu.mean + shift, scale * spec_mu.cov)
        entropy = gaussian_kl(spec_nu, spec_mu)
        rhs = lip_map.lipschitz_L * math.sqrt(C * entropy)
        xs = sample_vectors(spec_nu, SeededRng(seed, 10_000 + trial), n)
        ys = sample_vectors(spec_mu, SeededRng(seed, 20_000 + trial), n)
        pushed_a = lip_map.apply(xs)
        pushed_b = lip_map.apply(ys)
        lhs = empirical_wasserstein(
            measure_from_vectors(pushed_a),
            measure_from_vectors(pushed_b),
            GroundCost("euclidean"),
            2.0,
        )
        stderr = _bootstrap_stderr(pushed_a, pushed_b, 2.0, gen, bootstrap)
        out.append(
            PushforwardTrial(lhs=lhs, rhs=rhs, stderr=stderr, holds=lhs <= rhs + 3 * stderr)
        )
    return PushforwardReport(trials=tuple(out), all_hold=all(t.holds for t in out))


@dataclass(frozen=True)
class MetricAxiomsReport:
    checks: tuple
    all_hold: bool


def metric_axioms_check(
    points, cost: GroundCost, p: float, triangle_tol: float = 1e-10
) -> MetricAxiomsReport:
    """Split a sample into three disjoint groups and verify that the induced
    Wasserstein distance is a pseudometric: zero on identical measures,
    symmetric exactly, and triangle up to the stated tolerance."""
    measure = points if isinstance(points, EmpiricalMeasure) else EmpiricalMeasure(points)
    n = measure.size
    if n < 3:
        raise ValueError("need at least three points for three disjoint groups")
    third = n // 3
    groups = [
        measure.subset(range(0, third)),
        measure.subset(range(third, 2 * third)),
        measure.subset(range(2 * third, 3 * third)),
    ]
    w = {}
    for i in range(3):
        for j in range(3):
            if i <= j:
                w[(i, j)] = empirical_wasserstein(groups[i], groups[j], cost, p)
    w_ab = w[(0, 1)]
    w_ba = empirical_wasserstein(groups[1], groups[0], cost, p)
    checks = (
        ("identity", w[(0, 0)], 0.0, w[(0, 0)] == 0.0),
        ("symmetry", w_ab, w_ba, w_ab == w_ba),
        (
            "triangle",
            w[(0, 2)],
            w[(0, 1)] + w[(1, 2)],
            w[(0, 2)] <= w[(0, 1)] + w[(1, 2)] + triangle_tol,
        ),
    )
    return MetricAxiomsReport(checks=checks, all_hold=all(c[3] for c in checks))

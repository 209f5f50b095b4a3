"""Gaussian process sampling and Cameron-Martin geometry on grids.

Path kinds are sampled on the uniform grid over [0, T], started at zero.
The Cameron-Martin norm implemented here is the one of Brownian motion
(W^{1,2} norm of the interpolant); projection pseudometrics are built from
the Schauder system, whose coefficients are finite combinations of point
evaluations and therefore extend to arbitrary continuous paths.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import NumericalError
from .paths import SampledPath

_PATH_KINDS = ("brownian", "fbm", "ou", "bridge")
_KINDS = _PATH_KINDS + ("finite_dim",)


@dataclass(frozen=True)
class GaussianSpec:
    """Description of a Gaussian law: a path process or a finite-dimensional one.

    Path kinds use ``horizon``/``n``/``dim`` (uniform grid of n points on
    [0, horizon], dim independent coordinates).  The finite-dimensional kind
    carries an explicit mean vector and covariance matrix instead.
    """

    kind: str
    horizon: float = 1.0
    n: int = 2
    dim: int = 1
    hurst: Optional[float] = None
    theta: Optional[float] = None
    sigma: Optional[float] = None
    mean: Optional[np.ndarray] = None
    cov: Optional[np.ndarray] = None

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ValueError(f"unknown Gaussian kind {self.kind!r}")
        if self.kind in _PATH_KINDS:
            if not self.horizon > 0:
                raise ValueError("horizon must be positive")
            if self.n < 2:
                raise ValueError("need n >= 2 grid points")
            if self.dim < 1:
                raise ValueError("need dim >= 1")
            if self.kind == "fbm":
                if self.hurst is None or not 0.0 < self.hurst < 1.0:
                    raise ValueError("fbm needs hurst in (0, 1)")
            if self.kind == "ou":
                if self.theta is None or self.theta <= 0:
                    raise ValueError("ou needs theta > 0")
                if self.sigma is None or self.sigma <= 0:
                    raise ValueError("ou needs sigma > 0")
        else:
            m = np.asarray(self.mean, dtype=float).copy()
            c = np.asarray(self.cov, dtype=float).copy()
            if m.ndim != 1 or c.shape != (m.size, m.size):
                raise ValueError("finite_dim needs mean (k,) and cov (k, k)")
            if not np.allclose(c, c.T):
                raise ValueError("covariance must be symmetric")
            if np.min(np.linalg.eigvalsh(0.5 * (c + c.T))) < -1e-10 * max(
                1.0, float(np.trace(c))
            ):
                raise ValueError("covariance must be positive semidefinite")
            m.setflags(write=False)
            c.setflags(write=False)
            object.__setattr__(self, "mean", m)
            object.__setattr__(self, "cov", c)

    @classmethod
    def brownian(cls, horizon=1.0, n=256, dim=1):
        return cls("brownian", horizon=horizon, n=n, dim=dim)

    @classmethod
    def fbm(cls, hurst, horizon=1.0, n=256, dim=1):
        return cls("fbm", horizon=horizon, n=n, dim=dim, hurst=hurst)

    @classmethod
    def ornstein_uhlenbeck(cls, theta, sigma, horizon=1.0, n=256, dim=1):
        return cls("ou", horizon=horizon, n=n, dim=dim, theta=theta, sigma=sigma)

    @classmethod
    def bridge(cls, horizon=1.0, n=256, dim=1):
        return cls("bridge", horizon=horizon, n=n, dim=dim)

    @classmethod
    def finite_dim(cls, mean, cov):
        mean = np.asarray(mean, dtype=float)
        return cls("finite_dim", dim=mean.size, mean=mean, cov=cov)

    @property
    def is_path_kind(self) -> bool:
        return self.kind in _PATH_KINDS

    def sigma2(self) -> float:
        """Largest covariance eigenvalue: sup over unit functionals of the
        second moment, the scale entering the weak transportation bound."""
        if self.kind != "finite_dim":
            raise ValueError("sigma2 is defined for the finite-dimensional kind")
        return float(np.max(np.linalg.eigvalsh(self.cov)))

    def grid(self) -> np.ndarray:
        if not self.is_path_kind:
            raise ValueError("grid is defined for path kinds")
        return np.linspace(0.0, self.horizon, self.n)


@dataclass(frozen=True)
class SeededRng:
    """Reproducible random stream: (seed, stream) fully determines the output.

    Distinct stream ids give statistically independent generators, so Monte
    Carlo sweeps can assign one stream per trial and stay schedule-independent.
    """

    seed: int
    stream: int = 0

    def generator(self) -> np.random.Generator:
        ss = np.random.SeedSequence(entropy=self.seed, spawn_key=(self.stream,))
        return np.random.default_rng(ss)


def fbm_covariance(times: np.ndarray, hurst: float) -> np.ndarray:
    """Exact fractional Brownian covariance on the given times."""
    s = times[:, None]
    t = times[None, :]
    h2 = 2.0 * hurst
    return 0.5 * (np.abs(s) ** h2 + np.abs(t) ** h2 - np.abs(t - s) ** h2)


def _fbm_cholesky(times: np.ndarray, hurst: float) -> np.ndarray:
    cov = fbm_covariance(times, hurst)
    jitter = 1e-12 * np.trace(cov) / cov.shape[0]
    cov = cov + jitter * np.eye(cov.shape[0])
    try:
        return np.linalg.cholesky(cov)
    except np.linalg.LinAlgError as exc:
        raise NumericalError("fBm covariance not positive definite after jitter") from exc


def sample_path(spec: GaussianSpec, rng: SeededRng) -> SampledPath:
    """Draw one sample path on the uniform grid, started at zero.

    Brownian motion uses independent scaled increments, fBm a dense Cholesky
    factor of the exact covariance, the Ornstein-Uhlenbeck process its exact
    transition, and the bridge sequential conditioning of Brownian motion.
    """
    batch = sample_paths(spec, rng, 1)
    return SampledPath(spec.grid(), batch[0])


def sample_paths(spec: GaussianSpec, rng: SeededRng, count: int) -> np.ndarray:
    """Vectorized sampling: returns an array of shape (count, n, dim)."""
    if not spec.is_path_kind:
        raise ValueError("sample_paths needs a path kind; use sample_vectors")
    if count < 1:
        raise ValueError("count must be >= 1")
    gen = rng.generator()
    t = spec.grid()
    dt = np.diff(t)
    n, d = spec.n, spec.dim
    out = np.zeros((count, n, d))
    if spec.kind == "brownian":
        z = gen.standard_normal((count, n - 1, d))
        out[:, 1:, :] = np.cumsum(np.sqrt(dt)[None, :, None] * z, axis=1)
    elif spec.kind == "fbm":
        chol = _fbm_cholesky(t[1:], spec.hurst)
        z = gen.standard_normal((count, n - 1, d))
        out[:, 1:, :] = np.einsum("ij,cjd->cid", chol, z)
    elif spec.kind == "ou":
        decay = np.exp(-spec.theta * dt)
        scale = spec.sigma * np.sqrt((1.0 - decay**2) / (2.0 * spec.theta))
        z = gen.standard_normal((count, n - 1, d))
        for k in range(n - 1):
            out[:, k + 1, :] = decay[k] * out[:, k, :] + scale[k] * z[:, k, :]
    elif spec.kind == "bridge":
        horizon = spec.horizon
        z = gen.standard_normal((count, n - 1, d))
        for k in range(n - 1):
            remaining = horizon - t[k]
            shrink = (horizon - t[k + 1]) / remaining
            var = dt[k] * (horizon - t[k + 1]) / remaining
            out[:, k + 1, :] = shrink * out[:, k, :] + np.sqrt(max(var, 0.0)) * z[:, k, :]
    if not np.all(np.isfinite(out)):
        raise NumericalError("non-finite values during path sampling")
    return out


def sample_vectors(spec: GaussianSpec, rng: SeededRng, count: int) -> np.ndarray:
    """i.i.d. draws from a finite-dimensional Gaussian, shape (count, k)."""
    if spec.kind != "finite_dim":
        raise ValueError("sample_vectors needs the finite-dimensional kind")
    gen = rng.generator()
    return gen.multivariate_normal(spec.mean, spec.cov, size=count, method="eigh")


def cm_norm(h: SampledPath) -> float:
    """Cameron-Martin (W^{1,2}) norm of the linear interpolant of h, h(0) = 0."""
    if not np.all(h.values[0] == 0.0):
        raise ValueError("cm_norm needs h(0) = 0")
    dh = h.increments()
    dt = np.diff(h.times)
    return float(np.sqrt(np.sum(np.sum(dh**2, axis=1) / dt)))


def _require_dyadic_scalar(x: SampledPath):
    if x.d != 1:
        raise ValueError("Schauder projections are implemented for scalar paths")
    m = x.n - 1
    if m < 1 or (m & (m - 1)) != 0:
        raise ValueError("need a dyadic grid: n - 1 must be a power of two")
    if float(x.values[0, 0]) != 0.0:
        raise ValueError("need x(0) = 0")


def _schauder_points(k: int, horizon: float):
    """Evaluation points and weights of the k-th Schauder coefficient functional.

    k = 0 is the linear function t/sqrt(T): coefficient h(T)/sqrt(T).
    k >= 1 enumerates integrated Haar wavelets level by level; the
    coefficient is sqrt(2^level / T) * (2 h(mid) - h(left) - h(right)).
    """
    if k == 0:
        return [(horizon, 1.0 / np.sqrt(horizon))]
    level = int(np.floor(np.log2(k)))
    pos = k - (1 << level)
    width = horizon / (1 << level)
    left = pos * width
    mid = left + 0.5 * width
    right = left + width
    scale = np.sqrt((1 << level) / horizon)
    return [(mid, 2.0 * scale), (left, -scale), (right, -scale)]


def schauder_coeffs(x: SampledPath, n_basis: int) -> np.ndarray:
    """First n_basis coefficients of x against the Schauder system on [0, T].

    Each coefficient is a finite linear combination of point evaluations of
    the interpolant, so it is defined for any continuous path.  For a
    piecewise-linear path on a dyadic grid with 2^m segments, coefficients
    beyond index 2^m vanish and the first 2^m satisfy Parseval's identity
    against the Cameron-Martin norm.
    """
    _require_dyadic_scalar(x)
    if n_basis < 1:
        raise ValueError("n_basis must be >= 1")
    t = x.times
    v = x.values[:, 0]
    horizon = x.horizon
    coeffs = np.empty(n_basis)
    for k in range(n_basis):
        acc = 0.0
        for point, weight in _schauder_points(k, horizon):
            acc += weight * float(np.interp(point, t, v))
        coeffs[k] = acc
    return coeffs


def schauder_functional_norms(n_basis: int, horizon: float) -> np.ndarray:
    """Sup-norm operator norms of the coefficient functionals on paths with
    x(0) = 0 (evaluation weights at t = 0 drop out)."""
    norms = np.empty(n_basis)
    for k in range(n_basis):
        norms[k] = sum(abs(w) for pt, w in _schauder_points(k, horizon) if pt > 0.0)
    return norms


def projection_metric(x: SampledPath, y: SampledPath, n_basis: int) -> float:
    """Finite-rank projection pseudometric: l2 norm of the first n_basis
    Schauder coefficients of x - y, capped at n_basis."""
    if not x.same_grid(y):
        raise ValueError("paths must share a grid")
    if not np.array_equal(x.values[0], y.values[0]):
        raise ValueError("projection metric needs x(0) = y(0)")
    diff = x - y
    coeffs = schauder_coeffs(diff, n_basis)
    return float(min(np.sqrt(np.sum(coeffs**2)), float(n_basis)))

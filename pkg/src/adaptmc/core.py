"""Geometry, sampling and the basic Monte Carlo estimators on [0, 1)^d.

Boxes are half-open: a point ``x`` lies in ``[lower, upper)`` iff
``lower[k] <= x[k] < upper[k]`` on every axis.  A :class:`Mesh` is an
exact partition of the unit hypercube into such boxes and stores its
strata column-wise as numpy arrays so that sampling a whole mesh is a
handful of vectorized calls.
"""
from __future__ import annotations

import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np

# strata per RNG substream; fixed so results never depend on thread count
BLOCK_SIZE = 256


@dataclass(frozen=True)
class HyperRect:
    lower: tuple[float, ...]
    upper: tuple[float, ...]

    def __post_init__(self):
        lo = tuple(float(v) for v in self.lower)
        hi = tuple(float(v) for v in self.upper)
        if len(lo) != len(hi) or not lo:
            raise ValueError("lower and upper must be non-empty and of equal length")
        for a, b in zip(lo, hi):
            if not (0.0 <= a < b <= 1.0):
                raise ValueError(f"invalid box side [{a}, {b})")
        object.__setattr__(self, "lower", lo)
        object.__setattr__(self, "upper", hi)

    @classmethod
    def unit(cls, dim: int) -> HyperRect:
        return cls((0.0,) * dim, (1.0,) * dim)

    @property
    def dim(self) -> int:
        return len(self.lower)

    def contains(self, x) -> bool:
        return all(a <= v < b for a, v, b in zip(self.lower, x, self.upper))


@dataclass(frozen=True)
class StratumMoments:
    count: int
    mean_f: float
    sigma2_bar: float


@dataclass(frozen=True)
class Stratum:
    rect: HyperRect
    n: int
    depth: int = 0
    moments: StratumMoments | None = None


@dataclass(frozen=True)
class RngStream:
    """A reproducible random substream.

    ``stream_id`` is a path of non-negative integers fed to numpy's
    ``SeedSequence`` as its spawn key, so distinct ids under one seed give
    independent generators and the whole run is a function of ``seed``.
    """

    seed: int
    stream_id: tuple[int, ...] = ()

    def spawn(self, *ids: int) -> RngStream:
        return RngStream(self.seed, self.stream_id + tuple(int(i) for i in ids))

    def generator(self) -> np.random.Generator:
        ss = np.random.SeedSequence(self.seed, spawn_key=self.stream_id)
        return np.random.Generator(np.random.PCG64(ss))


def measure(rect: HyperRect) -> float:
    return math.prod(b - a for a, b in zip(rect.lower, rect.upper))


def _below(upper: np.ndarray) -> np.ndarray:
    return np.nextafter(upper, -np.inf)


def sample_uniform(rect: HyperRect, k: int, rng: RngStream) -> np.ndarray:
    """Draw ``k`` i.i.d. uniform points in ``rect``; returns shape ``(k, d)``."""
    if k < 1:
        raise ValueError("k must be positive")
    lo = np.asarray(rect.lower)
    hi = np.asarray(rect.upper)
    u = rng.generator().random((k, rect.dim))
    # lo + u*w can round up onto the open face
    return np.minimum(lo + u * (hi - lo), _below(hi))


def _grouped_moments(values: np.ndarray, counts: np.ndarray):
    """Per-group mean and biased variance of contiguous groups of ``values``.

    Each group is shifted by its first value before accumulating, which keeps
    the ``E[v^2] - E[v]^2`` form accurate and makes constant groups exact.
    """
    counts = np.asarray(counts, dtype=np.int64)
    p = len(counts)
    groups = np.repeat(np.arange(p), counts)
    starts = np.cumsum(counts) - counts
    shift = values[starts]
    dv = values - shift[groups]
    s1 = np.bincount(groups, weights=dv, minlength=p) / counts
    s2 = np.bincount(groups, weights=dv * dv, minlength=p) / counts
    mean = shift + s1
    sigma2 = np.maximum(s2 - s1 * s1, 0.0)
    return mean, sigma2


def stratum_moments(values: Sequence[float]) -> StratumMoments:
    v = np.asarray(values, dtype=float).ravel()
    if v.size == 0:
        raise ValueError("no samples")
    mean, sigma2 = _grouped_moments(v, np.array([v.size]))
    return StratumMoments(int(v.size), float(mean[0]), float(sigma2[0]))


class Mesh:
    """A partition of [0, 1)^d into half-open boxes.

    Arrays (all read-only):

    * ``lower``, ``upper`` -- shape ``(p, d)`` box corners
    * ``n`` -- allocated sample count per stratum
    * ``depth`` -- number of splits since the initial grid
    * ``mean``, ``sigma2`` -- empirical moments, NaN while unsampled
    """

    def __init__(self, lower, upper, n, depth=None, mean=None, sigma2=None):
        self.lower = np.array(lower, dtype=float, ndmin=2)
        self.upper = np.array(upper, dtype=float, ndmin=2)
        p = len(self.lower)
        self.n = np.array(n, dtype=np.int64).reshape(p)
        self.depth = (np.zeros(p, dtype=np.int64) if depth is None
                      else np.array(depth, dtype=np.int64).reshape(p))
        self.mean = np.full(p, np.nan) if mean is None else np.array(mean, dtype=float)
        self.sigma2 = np.full(p, np.nan) if sigma2 is None else np.array(sigma2, dtype=float)
        if self.upper.shape != self.lower.shape:
            raise ValueError("lower/upper shape mismatch")
        if np.any(self.n < 1):
            raise ValueError("every stratum needs a positive sample count")
        for arr in (self.lower, self.upper, self.n, self.depth, self.mean, self.sigma2):
            arr.setflags(write=False)

    @classmethod
    def grid(cls, dim: int, segments: int, n: int = 1) -> Mesh:
        """Regular ``segments**dim`` grid, every cell allocated ``n`` points."""
        edges = np.arange(segments + 1) / segments
        cells = np.array(list(itertools.product(range(segments), repeat=dim)))
        return cls(edges[cells], edges[cells + 1], np.full(len(cells), n))

    @classmethod
    def unit(cls, dim: int, n: int = 1) -> Mesh:
        return cls.grid(dim, 1, n)

    @classmethod
    def from_strata(cls, strata: Iterable[Stratum]) -> Mesh:
        strata = list(strata)
        mom = [s.moments for s in strata]
        return cls([s.rect.lower for s in strata], [s.rect.upper for s in strata],
                   [s.n for s in strata], [s.depth for s in strata],
                   [np.nan if m is None else m.mean_f for m in mom],
                   [np.nan if m is None else m.sigma2_bar for m in mom])

    def __len__(self) -> int:
        return len(self.lower)

    @property
    def dim(self) -> int:
        return self.lower.shape[1]

    @property
    def measures(self) -> np.ndarray:
        return np.prod(self.upper - self.lower, axis=1)

    @property
    def sampled(self) -> bool:
        return bool(np.all(np.isfinite(self.mean)))

    def stratum(self, i: int) -> Stratum:
        mom = None
        if np.isfinite(self.mean[i]):
            mom = StratumMoments(int(self.n[i]), float(self.mean[i]), float(self.sigma2[i]))
        return Stratum(HyperRect(self.lower[i], self.upper[i]), int(self.n[i]),
                       int(self.depth[i]), mom)

    @property
    def strata(self) -> list[Stratum]:
        return [self.stratum(i) for i in range(len(self))]

    def replace(self, **kw) -> Mesh:
        args = dict(lower=self.lower, upper=self.upper, n=self.n, depth=self.depth,
                    mean=self.mean, sigma2=self.sigma2)
        args.update(kw)
        return Mesh(**args)

    def locate_counts(self, points, chunk: int = 512) -> np.ndarray:
        """Number of strata containing each point (1 everywhere for a partition)."""
        pts = np.asarray(points, dtype=float)
        out = np.empty(len(pts), dtype=np.int64)
        for s in range(0, len(pts), chunk):
            x = pts[s:s + chunk, None, :]
            inside = np.all((self.lower <= x) & (x < self.upper), axis=2)
            out[s:s + chunk] = inside.sum(axis=1)
        return out

    def check_partition(self, probes: int = 10_000, seed: int = 0) -> None:
        """Raise ``AssertionError`` unless the strata tile [0, 1)^d exactly."""
        total = math.fsum(self.measures)
        assert abs(total - 1.0) <= 1e-12, f"measures sum to {total!r}"
        assert np.all(self.lower >= 0) and np.all(self.upper <= 1)
        assert np.all(self.lower < self.upper)
        pts = np.random.default_rng(seed).random((probes, self.dim))
        counts = self.locate_counts(pts)
        assert np.all(counts == 1), f"{np.sum(counts != 1)} probes not covered exactly once"


Integrand = Callable[[np.ndarray], np.ndarray]


def _block_points(mesh: Mesh, counts: np.ndarray, start: int, stop: int, rng: RngStream):
    idx = np.repeat(np.arange(start, stop), counts[start:stop])
    lo = mesh.lower[idx]
    hi = mesh.upper[idx]
    u = rng.generator().random((len(idx), mesh.dim))
    return np.minimum(lo + u * (hi - lo), _below(hi))


def draw_points(mesh: Mesh, counts, rng: RngStream, threads: int = 1) -> np.ndarray:
    """Uniform points for every stratum, grouped contiguously in stratum order.

    Strata are cut into fixed blocks of ``BLOCK_SIZE``; block ``b`` draws from
    ``rng.spawn(b)``, so the output is the same for any ``threads``.
    """
    counts = np.asarray(counts, dtype=np.int64)
    if len(counts) != len(mesh):
        raise ValueError("counts must align with strata")
    bounds = [(s, min(s + BLOCK_SIZE, len(mesh))) for s in range(0, len(mesh), BLOCK_SIZE)]
    jobs = [(mesh, counts, a, b, rng.spawn(k)) for k, (a, b) in enumerate(bounds)]
    if threads > 1 and len(jobs) > 1:
        with ThreadPoolExecutor(threads) as pool:
            parts = list(pool.map(lambda j: _block_points(*j), jobs))
    else:
        parts = [_block_points(*j) for j in jobs]
    return np.concatenate(parts)


def sample_mesh(mesh: Mesh, f: Integrand, counts, rng: RngStream, threads: int = 1) -> Mesh:
    """Sample every stratum afresh and return the mesh with updated moments."""
    counts = np.asarray(counts, dtype=np.int64)
    pts = draw_points(mesh, counts, rng, threads)
    values = np.asarray(f(pts), dtype=float).reshape(len(pts))
    mean, sigma2 = _grouped_moments(values, counts)
    return mesh.replace(n=counts, mean=mean, sigma2=sigma2)


def _require_sampled(mesh: Mesh):
    if not mesh.sampled:
        raise ValueError("unsampled stratum")


def stratified_estimate(mesh: Mesh) -> float:
    _require_sampled(mesh)
    return math.fsum(mesh.measures * mesh.mean)


def variance_terms(a, sigma2, n) -> np.ndarray:
    """Per-stratum contributions ``a_i^2 sigma_i^2 / n_i`` to the estimator variance."""
    a = np.asarray(a, dtype=float)
    return a * a * np.asarray(sigma2, dtype=float) / np.asarray(n, dtype=float)


def stratified_variance_estimate(mesh: Mesh) -> float:
    _require_sampled(mesh)
    return math.fsum(variance_terms(mesh.measures, mesh.sigma2, mesh.n))


def crude_mc(f: Integrand, N: int, rng: RngStream, dim: int | None = None):
    """Plain Monte Carlo over [0, 1)^d; returns ``(estimate, sigma2_bar)``.

    This is the stratified estimator on the one-cell mesh, so both agree
    bit-for-bit on identical samples.
    """
    if N < 2:
        raise ValueError("insufficient samples")
    d = dim if dim is not None else getattr(f, "dim")
    m = sample_mesh(Mesh.unit(d), f, [N], rng)
    return stratified_estimate(m), float(m.sigma2[0])


def relative_error(exact: float, estimate: float) -> float:
    return (exact - estimate) / exact

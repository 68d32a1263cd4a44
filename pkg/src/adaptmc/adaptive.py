"""Indicator-driven mesh refinement and frozen-mesh replication.

:func:`algo1` alternates optimal allocation, fresh sampling, indicator
computation and bisection of the strata whose indicator exceeds
``C_m`` times the mean.  :func:`algo2` freezes the final mesh and counts
and repeats the stratified estimate to measure its variance.
"""
from __future__ import annotations

import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from .allocation import AllocationPlan, optimal_allocation
from .core import (Integrand, Mesh, RngStream, Stratum, crude_mc, sample_mesh,
                   stratified_estimate, variance_terms)

# top-level stream ids
INITIAL, ITERATION, ESSAY, CRUDE = 0, 1, 2, 3


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class IndicatorSet:
    per_stratum: np.ndarray
    total: float
    mean: float


@dataclass(frozen=True)
class AdaptiveConfig:
    N: int
    L: int = 4
    epsilon: float = 0.0
    C_m: float = 2.0
    M_rp: int = 2
    N0: int = 4
    dim: int = 2
    seed: int = 0

    def __post_init__(self):
        if self.N < 1 or self.L < 1 or self.M_rp < 1 or self.N0 < 1 or self.dim < 1:
            raise ConfigError("N, L, M_rp, N0 and dim must be positive")
        if not self.C_m > 1:
            raise ConfigError(f"C_m must exceed 1, got {self.C_m}")
        if self.epsilon < 0:
            raise ConfigError("epsilon must be non-negative")
        cells = self.N0 ** self.dim
        if self.N < cells * self.M_rp:
            raise ConfigError(
                f"budget N={self.N} too small for a {self.N0}^{self.dim} grid "
                f"with M_rp={self.M_rp} (need at least {cells * self.M_rp})")


@dataclass(frozen=True)
class RunReport:
    estimate: float
    stop_level: int
    variance_trace: tuple[float, ...]
    mesh_final: Mesh
    allocation_final: AllocationPlan
    wall_time: float
    initial_variance: float = 0.0
    discarded: int = 0
    history: tuple[Mesh, ...] = field(default=(), repr=False)

    def same_result(self, other: RunReport) -> bool:
        """Equality of everything except timing."""
        a, b = self.mesh_final, other.mesh_final
        return (self.estimate == other.estimate
                and self.stop_level == other.stop_level
                and self.variance_trace == other.variance_trace
                and self.allocation_final == other.allocation_final
                and self.initial_variance == other.initial_variance
                and len(a) == len(b)
                and all(np.array_equal(getattr(a, k), getattr(b, k), equal_nan=True)
                        for k in ("lower", "upper", "n", "depth", "mean", "sigma2")))


@dataclass(frozen=True)
class EssayReport:
    mean_estimate: float
    variance_estimate: float
    essays: tuple[float, ...]
    wall_time: float
    efficiency: float
    run: RunReport | None = field(default=None, repr=False)

    def same_result(self, other: EssayReport) -> bool:
        return (self.essays == other.essays
                and self.mean_estimate == other.mean_estimate
                and self.variance_estimate == other.variance_estimate
                and (self.run is None) == (other.run is None)
                and (self.run is None or self.run.same_result(other.run)))


def indicators(mesh: Mesh, plan: AllocationPlan) -> IndicatorSet:
    if len(plan.counts) != len(mesh):
        raise ValueError(f"plan has {len(plan.counts)} counts for {len(mesh)} strata")
    if not mesh.sampled:
        raise ValueError("unsampled stratum")
    per = variance_terms(mesh.measures, mesh.sigma2, plan.counts)
    total = math.fsum(per)
    return IndicatorSet(per, total, total / len(per))


def mark(ind: IndicatorSet, C_m: float) -> set[int]:
    return {int(i) for i in np.flatnonzero(ind.per_stratum > C_m * ind.mean)}


def _children_bounds(lower: np.ndarray, upper: np.ndarray):
    d = lower.shape[-1]
    bits = np.array(list(np.ndindex(*(2,) * d)), dtype=bool)
    mid = (lower + upper) / 2
    lo = np.where(bits, mid, lower)
    hi = np.where(bits, upper, mid)
    return lo, hi


def split(s: Stratum, M_rp: int = 2) -> list[Stratum]:
    """Bisect every axis of ``s``; the 2^d children share its count and moments."""
    lo, hi = _children_bounds(np.asarray(s.rect.lower), np.asarray(s.rect.upper))
    n = max(s.n // len(lo), M_rp)
    mom = None if s.moments is None else type(s.moments)(n, s.moments.mean_f, s.moments.sigma2_bar)
    return [Stratum(type(s.rect)(a, b), n, s.depth + 1, mom) for a, b in zip(lo, hi)]


def refine(mesh: Mesh, plan: AllocationPlan, marks: Iterable[int], M_rp: int = 2):
    """Replace each marked stratum by its children, in place in the ordering.

    Returns the new mesh and a plan whose counts are the mesh counts.
    Children keep the parent's moments until they are sampled themselves.
    """
    marks = set(marks)
    if not marks:
        return mesh, plan
    if not all(0 <= i < len(mesh) for i in marks):
        raise IndexError("mark out of range")
    m = 2 ** mesh.dim
    counts = np.asarray(plan.counts)
    cols = {k: [] for k in ("lower", "upper", "n", "depth", "mean", "sigma2")}
    for i in range(len(mesh)):
        if i in marks:
            lo, hi = _children_bounds(mesh.lower[i], mesh.upper[i])
            cols["lower"].append(lo)
            cols["upper"].append(hi)
            cols["n"].append(np.full(m, max(int(counts[i]) // m, M_rp)))
            cols["depth"].append(np.full(m, mesh.depth[i] + 1))
            cols["mean"].append(np.full(m, mesh.mean[i]))
            cols["sigma2"].append(np.full(m, mesh.sigma2[i]))
        else:
            cols["lower"].append(mesh.lower[i:i + 1])
            cols["upper"].append(mesh.upper[i:i + 1])
            cols["n"].append(counts[i:i + 1])
            for k in ("depth", "mean", "sigma2"):
                cols[k].append(getattr(mesh, k)[i:i + 1])
    new = Mesh(**{k: np.concatenate(v) for k, v in cols.items()})
    new_plan = AllocationPlan(new.n, plan.delta_bar, plan.requested_total, int(new.n.sum()))
    return new, new_plan


def algo1(cfg: AdaptiveConfig, f: Integrand, rng: RngStream | None = None,
          threads: int = 1, keep_history: bool = False) -> RunReport:
    """Adaptive stratified integration of ``f`` over [0, 1)^d.

    Each iteration reallocates the budget from the latest moments, samples
    every stratum afresh, records the indicator total ``V`` and refines the
    marked strata.  The loop runs while the level is at most ``cfg.L`` and
    the last ``V`` exceeds ``cfg.epsilon``.  The returned estimate and mesh
    are those of the last sampled level; the refinement made after it is
    dropped.
    """
    if getattr(f, "dim", cfg.dim) != cfg.dim:
        raise ConfigError(f"integrand dimension {f.dim} != config dim {cfg.dim}")
    rng = RngStream(cfg.seed) if rng is None else rng
    t0 = time.perf_counter()
    cells = cfg.N0 ** cfg.dim
    n_init = cfg.N // cells
    mesh = Mesh.grid(cfg.dim, cfg.N0, n_init)
    mesh = sample_mesh(mesh, f, mesh.n, rng.spawn(INITIAL), threads)
    plan = AllocationPlan(mesh.n, 0.0, cfg.N, int(mesh.n.sum()))
    v = indicators(mesh, plan).total
    initial_variance = v
    sampled, sampled_plan = mesh, plan
    trace = []
    history = []
    level = 1
    while level <= cfg.L and v > cfg.epsilon:
        plan = optimal_allocation(mesh, cfg.N, cfg.M_rp)
        mesh = sample_mesh(mesh, f, plan.counts, rng.spawn(ITERATION, level), threads)
        ind = indicators(mesh, plan)
        v = ind.total
        trace.append(v)
        sampled, sampled_plan = mesh, plan
        if keep_history:
            history.append(mesh)
        mesh, plan = refine(mesh, plan, mark(ind, cfg.C_m), cfg.M_rp)
        level += 1
    if not trace:
        # nothing to refine at all; the initial sampling is level 1
        trace.append(v)
        if keep_history:
            history.append(sampled)
    return RunReport(
        estimate=stratified_estimate(sampled),
        stop_level=len(trace),
        variance_trace=tuple(trace),
        mesh_final=sampled,
        allocation_final=sampled_plan,
        wall_time=time.perf_counter() - t0,
        initial_variance=initial_variance,
        discarded=cfg.N - n_init * cells,
        history=tuple(history),
    )


def sample_variance(values) -> tuple[float, float]:
    """Mean and unbiased variance, shifted by the first value for stability."""
    v = np.asarray(values, dtype=float)
    if len(v) < 2:
        raise ValueError("variance undefined")
    dv = v - v[0]
    s1 = math.fsum(dv) / len(v)
    var = math.fsum((dv - s1) ** 2) / (len(v) - 1)
    return float(v[0] + s1), max(var, 0.0)


def efficiency(wall_time: float, variance: float) -> float:
    if wall_time <= 0:
        raise ValueError("wall_time must be positive")
    if variance == 0:
        return math.inf
    return 1.0 / (wall_time * variance)


def _map(fn, items, threads):
    if threads > 1:
        with ThreadPoolExecutor(threads) as pool:
            return list(pool.map(fn, items))
    return [fn(x) for x in items]


def algo2(cfg: AdaptiveConfig, N_ess: int, f: Integrand, rng: RngStream | None = None,
          threads: int = 1) -> EssayReport:
    """Variance of the adaptive estimator from ``N_ess`` essays on one frozen mesh."""
    if N_ess < 2:
        raise ValueError("variance undefined")
    rng = RngStream(cfg.seed) if rng is None else rng
    t0 = time.perf_counter()
    run = algo1(cfg, f, rng, threads)
    frozen = run.mesh_final

    def essay(e):
        return stratified_estimate(sample_mesh(frozen, f, frozen.n, rng.spawn(ESSAY, e)))

    essays = [run.estimate] + _map(essay, range(2, N_ess + 1), threads)
    wall = time.perf_counter() - t0
    mean, var = sample_variance(essays)
    return EssayReport(mean, var, tuple(essays), wall, efficiency(wall, var), run)


def mc_essays(f: Integrand, N: int, N_ess: int, rng: RngStream, dim: int | None = None,
              threads: int = 1) -> EssayReport:
    """Crude Monte Carlo baseline replicated ``N_ess`` times at budget ``N``."""
    if N_ess < 2:
        raise ValueError("variance undefined")
    d = dim if dim is not None else f.dim
    t0 = time.perf_counter()
    essays = _map(lambda r: crude_mc(f, N, rng.spawn(CRUDE, r), d)[0], range(1, N_ess + 1), threads)
    wall = time.perf_counter() - t0
    mean, var = sample_variance(essays)
    return EssayReport(mean, var, tuple(essays), wall, efficiency(wall, var))

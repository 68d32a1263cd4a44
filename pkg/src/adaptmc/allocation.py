"""Per-stratum sample counts: proportional and empirical optimal allocation."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import Mesh


@dataclass(frozen=True)
class AllocationPlan:
    counts: np.ndarray
    delta_bar: float
    requested_total: int
    actual_total: int

    def __post_init__(self):
        c = np.array(self.counts, dtype=np.int64)
        c.setflags(write=False)
        object.__setattr__(self, "counts", c)

    def __eq__(self, other):
        if not isinstance(other, AllocationPlan):
            return NotImplemented
        return (np.array_equal(self.counts, other.counts)
                and self.delta_bar == other.delta_bar
                and self.requested_total == other.requested_total
                and self.actual_total == other.actual_total)


def largest_remainder(targets, total: int) -> np.ndarray:
    """Round non-negative reals to integers summing to ``total``.

    Floors every target, then hands the missing units to the largest
    fractional parts; ties go to the lower index.
    """
    t = np.asarray(targets, dtype=float)
    base = np.floor(t).astype(np.int64)
    missing = int(total - base.sum())
    missing = max(0, min(missing, len(t)))
    if missing:
        order = np.argsort(-(t - base), kind="stable")
        base[order[:missing]] += 1
    return base


def _plan(targets, N: int, M_rp: int, delta_bar: float) -> AllocationPlan:
    counts = np.maximum(largest_remainder(targets, N), M_rp)
    return AllocationPlan(counts, delta_bar, int(N), int(counts.sum()))


def proportional_allocation(mesh: Mesh, N: int, M_rp: int = 2) -> AllocationPlan:
    if N < 1:
        raise ValueError("N must be positive")
    return _plan(N * mesh.measures, N, M_rp, 0.0)


def optimal_allocation(mesh: Mesh, N: int, M_rp: int = 2) -> AllocationPlan:
    """Counts proportional to ``a_i * sigma_i`` using the empirical sigmas.

    Falls back to proportional allocation when every stratum has zero
    empirical variance, since the normalizer vanishes.
    """
    if N < 1:
        raise ValueError("N must be positive")
    if not mesh.sampled:
        raise ValueError("moments required")
    weights = mesh.measures * np.sqrt(mesh.sigma2)
    delta_bar = math.fsum(weights) / N
    if delta_bar == 0.0:
        return proportional_allocation(mesh, N, M_rp)
    return _plan(weights / delta_bar, N, M_rp, delta_bar)

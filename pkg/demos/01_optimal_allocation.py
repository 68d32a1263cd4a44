"""
Proportional versus optimal allocation on a fixed 4x4 grid.

A pilot run estimates the per-cell standard deviations of the quarter-disc
indicator; the budget is then shared in proportion to a_i * sigma_i instead
of a_i alone.  Cells entirely inside or outside the disc have zero variance
and drop to the minimum of 2 points.
"""
import math

import numpy as np

from adaptmc import (Mesh, RngStream, optimal_allocation, proportional_allocation,
                     sample_mesh, stratified_estimate, stratified_variance_estimate)
from adaptmc.integrands import disc

f = disc()
N = 10_000
mesh = Mesh.grid(2, 4)

# pilot run with proportional counts
prop = proportional_allocation(mesh, N)
pilot = sample_mesh(mesh, f, prop.counts, RngStream(0, (0,)))
print("proportional counts:\n", prop.counts.reshape(4, 4))
print("pilot estimate %.6f   variance %.3e" % (stratified_estimate(pilot),
                                                stratified_variance_estimate(pilot)))

opt = optimal_allocation(pilot, N)
print("optimal counts:\n", opt.counts.reshape(4, 4))
print("delta_bar = %.4g, total = %d (requested %d)" % (opt.delta_bar, opt.actual_total, N))

# resample with the optimal counts
second = sample_mesh(pilot, f, opt.counts, RngStream(0, (1,)))
print("optimal estimate %.6f   variance %.3e" % (stratified_estimate(second),
                                                  stratified_variance_estimate(second)))
print("crude MC variance at the same N: %.3e" % (math.pi / 4 * (1 - math.pi / 4) / N))

# the empirical variance term tracks the spread over repeated runs
reps = [stratified_estimate(sample_mesh(pilot, f, opt.counts, RngStream(s, (2,))))
        for s in range(200)]
print("spread of 200 repeats: %.3e" % np.var(reps, ddof=1))

"""
The 3D Gaussian exp(-50 |x|^2) on the unit cube.

Refinement concentrates around the corner at the origin; the script prints
how the deepest cells are distributed and checks the frozen-mesh variance
against crude Monte Carlo.
"""
import numpy as np

from adaptmc import AdaptiveConfig, RngStream, algo1, algo2, mc_essays
from adaptmc.integrands import registry_lookup

f = registry_lookup("gauss3d", alpha=50)
cfg = AdaptiveConfig(N=10_000, L=6, dim=3, seed=3)
rep = algo1(cfg, f)
mesh = rep.mesh_final
print(f"{len(mesh)} strata, depths {np.bincount(mesh.depth)}")
deep = mesh.depth == mesh.depth.max()
centers = (mesh.lower[deep] + mesh.upper[deep]) / 2
print("deepest cells: mean distance to origin %.3f" % np.linalg.norm(centers, axis=1).mean())
print(f"estimate {rep.estimate:.6e}  exact {f.exact_value:.6e}")

cfg4 = AdaptiveConfig(N=10_000, L=4, dim=3, seed=3)
amc = algo2(cfg4, 100, f)
mc = mc_essays(f, 10_000, 100, RngStream(3))
print(f"V_AMC {amc.variance_estimate:.3e}   V_MC {mc.variance_estimate:.3e}")
print(f"Eff_AMC {amc.efficiency:.3e}   Eff_MC {mc.efficiency:.3e}")

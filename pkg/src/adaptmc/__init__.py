"""Adaptive stratified Monte Carlo integration on the unit hypercube."""
from .adaptive import (AdaptiveConfig, ConfigError, EssayReport, IndicatorSet, RunReport,
                       algo1, algo2, efficiency, indicators, mark, mc_essays, refine, split)
from .allocation import AllocationPlan, optimal_allocation, proportional_allocation
from .core import (HyperRect, Mesh, RngStream, Stratum, StratumMoments, crude_mc, measure,
                   relative_error, sample_mesh, sample_uniform, stratified_estimate,
                   stratified_variance_estimate, stratum_moments)
from .integrands import NamedIntegrand, disc_indicator, gaussian, registry_lookup

__version__ = "0.1.0"

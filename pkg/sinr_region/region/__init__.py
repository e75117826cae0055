"""
Closed-form max-min SINR solvers, boundary sweeps and command runners.
"""

from sinr_region.region.static import (
    constrained_max_sinr,
    multi_constrained_max_sinr,
    recover_power,
    solve_on_support,
    unconstrained_max_sinr,
)
from sinr_region.region.sweep import BoundaryPoint, per_constraint_sweep, sweep_boundary
from sinr_region.region.time_varying import ExpandedSystem, expand, tv_constrained_max_sinr, tv_multi

__all__ = [
    "BoundaryPoint",
    "ExpandedSystem",
    "constrained_max_sinr",
    "expand",
    "multi_constrained_max_sinr",
    "per_constraint_sweep",
    "recover_power",
    "solve_on_support",
    "sweep_boundary",
    "tv_constrained_max_sinr",
    "tv_multi",
    "unconstrained_max_sinr",
]

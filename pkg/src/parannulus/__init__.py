"""Minimum-width strips, double-strips and parallelogram annuli of planar point sets."""

from .annulus import AnnulusSolution, build_gamma, decide, solve_fixed_fixed, solve_fixed_phi, solve_general
from .arrangement import DualArrangement, build_arrangement, delete_line, envelopes, insert_line, mid_chains, zone_walk
from .constrained import DynamicState, StateError, TrapezoidalMap, build_trapezoidal_map, offline_insertions, solve_constrained
from .double_strip import DoubleStripSolution, minimize_on_interval, solve_all_orientations, solve_fixed, tuple_intervals
from .geom import (
    DoubleStrip,
    DualLine,
    GeometryError,
    NonDualizableError,
    ParallelogramAnnulus,
    PointSet,
    Sinusoid,
    Strip,
    dualize_line,
    dualize_point,
    sigma,
    sinusoid_equal_roots,
    sinusoid_sum,
)
from .hull import antipodal_decomposition, convex_hull, extreme_points

__version__ = "0.1.0"

__all__ = [
    "AnnulusSolution",
    "DoubleStrip",
    "DoubleStripSolution",
    "DualArrangement",
    "DualLine",
    "DynamicState",
    "GeometryError",
    "NonDualizableError",
    "ParallelogramAnnulus",
    "PointSet",
    "Sinusoid",
    "StateError",
    "Strip",
    "TrapezoidalMap",
    "antipodal_decomposition",
    "build_arrangement",
    "build_gamma",
    "build_trapezoidal_map",
    "convex_hull",
    "decide",
    "delete_line",
    "dualize_line",
    "dualize_point",
    "envelopes",
    "extreme_points",
    "insert_line",
    "mid_chains",
    "minimize_on_interval",
    "offline_insertions",
    "sigma",
    "sinusoid_equal_roots",
    "sinusoid_sum",
    "solve_all_orientations",
    "solve_constrained",
    "solve_fixed",
    "solve_fixed_fixed",
    "solve_fixed_phi",
    "solve_general",
    "tuple_intervals",
    "zone_walk",
]

"""
InterpIQ Geometry Module

Points of the disk and the circle, Möbius factors, pseudohyperbolic distance and
log-domain Blaschke products.
"""

from .disk import (
    DiskPoint,
    BoundaryAngle,
    LogModulus,
    normalize_angle,
    mobius_factor,
    pseudo_distance,
    pseudo_distance_array,
    log_abs_factors,
    log_blaschke_at,
    log_blaschke_many,
    phi_lambda,
    phi_all,
)
from .arcs import arc_measure, symmetric_arc_measure, poisson_at_one

__all__ = [
    "DiskPoint",
    "BoundaryAngle",
    "LogModulus",
    "normalize_angle",
    "mobius_factor",
    "pseudo_distance",
    "pseudo_distance_array",
    "log_abs_factors",
    "log_blaschke_at",
    "log_blaschke_many",
    "phi_lambda",
    "phi_all",
    "arc_measure",
    "symmetric_arc_measure",
    "poisson_at_one",
]

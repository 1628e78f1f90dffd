"""
InterpIQ Harmonic Module

Boundary weights, Poisson extensions, balayage of disk measures and its dual
norms, and Harnack constants.
"""

from .weights import (
    ArcWeight,
    DiscreteMeasure,
    shadow_weight,
    shadow_touch_constant,
    weight_from_spec,
    measure_from_spec,
)
from .poisson import (
    poisson_kernel,
    harmonic_measure_arc,
    poisson_extension,
    poisson_extension_many,
    pairing,
    outer_log_modulus,
    outer_modular_bound,
    mean_value,
    quadrature_arc_measure,
)
from .balayage import (
    BoundarySamples,
    Balayage,
    DualNormResult,
    WeightAscentResult,
    balayage,
    boundary_grid,
    balayage_dual_norm,
    dual_norm_details,
    weight_ascent,
)
from .harnack import harnack_constant, harnack_factor, hyperbolic_diameter

__all__ = [
    "ArcWeight",
    "DiscreteMeasure",
    "shadow_weight",
    "shadow_touch_constant",
    "weight_from_spec",
    "measure_from_spec",
    "poisson_kernel",
    "harmonic_measure_arc",
    "poisson_extension",
    "poisson_extension_many",
    "pairing",
    "outer_log_modulus",
    "outer_modular_bound",
    "mean_value",
    "quadrature_arc_measure",
    "BoundarySamples",
    "Balayage",
    "DualNormResult",
    "WeightAscentResult",
    "balayage",
    "boundary_grid",
    "balayage_dual_norm",
    "dual_norm_details",
    "weight_ascent",
    "harnack_constant",
    "harnack_factor",
    "hyperbolic_diameter",
]

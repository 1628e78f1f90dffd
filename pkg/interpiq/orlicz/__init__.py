"""
InterpIQ Orlicz Module

Shape functions, modulars, Luxemburg/Amemiya/F-norms, numeric conjugation and
growth-condition probes.
"""

from .shapes import (
    OrliczShape,
    PowerShape,
    PsiShape,
    LogLogShape,
    ExpShape,
    TableShape,
    ConjugateShape,
    conjugate,
    shape_from_spec,
    shape_from_dict,
)
from .norms import (
    as_samples,
    modular,
    luxemburg_norm,
    orlicz_norm,
    fnorm,
    inverse_growth,
    asymptotic_ratio,
    pointeval_bound,
    holder_pairing,
    indicator_norm,
    constant_dual_norm,
)
from .conditions import (
    ConditionProbeResult,
    delta2_probe,
    nabla2_probe,
    tilde_delta2_probe,
    is_strongly_convex,
)

__all__ = [
    "OrliczShape",
    "PowerShape",
    "PsiShape",
    "LogLogShape",
    "ExpShape",
    "TableShape",
    "ConjugateShape",
    "conjugate",
    "shape_from_spec",
    "shape_from_dict",
    "as_samples",
    "modular",
    "luxemburg_norm",
    "orlicz_norm",
    "fnorm",
    "inverse_growth",
    "asymptotic_ratio",
    "pointeval_bound",
    "holder_pairing",
    "indicator_norm",
    "constant_dual_norm",
    "ConditionProbeResult",
    "delta2_probe",
    "nabla2_probe",
    "tilde_delta2_probe",
    "is_strongly_convex",
]

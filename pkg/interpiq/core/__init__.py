"""
InterpIQ Core Module

Interpolation diagnostics: Carleson and majorant checks, weight-class tests,
the dual-condition search, Hoffman splitting and the staged-sequence report.
"""

from .models import (
    DiagnosticReport,
    CarlesonResult,
    WeightClassResult,
    MAJORIZED,
    NOT_MAJORIZED,
    CARLESON,
    NOT_CARLESON,
    MEMBER,
    NOT_MEMBER,
    UNDECIDED,
)
from .analyzer import (
    InterpolationAnalyzer,
    shadow_class_check,
    weight_class_check,
    growth_shape,
    growth_model,
    pointeval_incompatibility,
)
from .searcher import DualSearcher, DualSearchState, condition_d_search
from .hoffman import HoffmanFit, hoffman_split, hoffman_verify, verification_grid
from .reporter import ReportWriter, section6_report, write_frame, manifest_for

__all__ = [
    "DiagnosticReport",
    "CarlesonResult",
    "WeightClassResult",
    "MAJORIZED",
    "NOT_MAJORIZED",
    "CARLESON",
    "NOT_CARLESON",
    "MEMBER",
    "NOT_MEMBER",
    "UNDECIDED",
    "InterpolationAnalyzer",
    "shadow_class_check",
    "weight_class_check",
    "growth_shape",
    "growth_model",
    "pointeval_incompatibility",
    "DualSearcher",
    "DualSearchState",
    "condition_d_search",
    "HoffmanFit",
    "hoffman_split",
    "hoffman_verify",
    "verification_grid",
    "ReportWriter",
    "section6_report",
    "write_frame",
    "manifest_for",
]

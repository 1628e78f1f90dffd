"""
InterpIQ - Hardy-Orlicz Interpolation Lab

Numerical experiments on interpolating sequences for Hardy-Orlicz spaces:
Blaschke products, Orlicz norms, Poisson balayage, dyadic splittings and the
staged counterexample sequence, with a reproducible command-line harness.
"""

__version__ = "1.0.0"
__author__ = "InterpIQ Team"
__description__ = "Hardy-Orlicz Interpolation Lab"

# Core imports for easy access
from .core.analyzer import InterpolationAnalyzer
from .core.searcher import DualSearcher, condition_d_search
from .core.hoffman import hoffman_split, hoffman_verify
from .core.reporter import ReportWriter, section6_report

from .sequences import GeneratedSequence, build_sequence, gen_radial, gen_section6
from .orlicz import OrliczShape, shape_from_spec
from .config import RunConfig

__all__ = [
    "InterpolationAnalyzer",
    "DualSearcher",
    "condition_d_search",
    "hoffman_split",
    "hoffman_verify",
    "ReportWriter",
    "section6_report",
    "GeneratedSequence",
    "build_sequence",
    "gen_radial",
    "gen_section6",
    "OrliczShape",
    "shape_from_spec",
    "RunConfig",
]

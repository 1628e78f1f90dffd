"""
InterpIQ Utils Module

Numerical primitives, spec-string parsing, validation and logging setup.
"""

from .numerics import (
    ConvergenceError,
    CompensatedAccumulator,
    neumaier_sum,
    pairwise_sum,
    bisect_threshold,
    expand_bracket,
    solve_increasing,
    grow_bracket,
)
from .validators import ConfigError, validate_run_config
from .helpers import parse_spec, parse_range, parse_floats, write_json, sha256_file
from .log import setup_logging

__all__ = [
    "ConvergenceError",
    "CompensatedAccumulator",
    "neumaier_sum",
    "pairwise_sum",
    "bisect_threshold",
    "expand_bracket",
    "solve_increasing",
    "grow_bracket",
    "ConfigError",
    "validate_run_config",
    "parse_spec",
    "parse_range",
    "parse_floats",
    "write_json",
    "sha256_file",
    "setup_logging",
]

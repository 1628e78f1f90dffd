"""
InterpIQ Sequences Module

Generators for the concrete test sequences and global sequence diagnostics.
"""

import json
from pathlib import Path

from ..utils.helpers import parse_floats, parse_spec
from ..utils.validators import MAX_N_MAX, ConfigError
from .base import GeneratedSequence, TailEstimate, blaschke_sum, separation_constant
from .radial import RadialGenerator, gen_radial
from .section6 import (
    Section6Generator,
    gen_section6,
    stage_count,
    stage_points,
    stagewise_phi,
    stage_contributions,
    stage_blaschke_sum,
    tail_bound,
    far_field_estimate,
    index_of,
)
from .perturbed import PerturbedPairsGenerator, gen_perturbed_pairs, perturbed_pair_residuals


def build_sequence(spec: str, field: str = "gen") -> GeneratedSequence:
    """
    Build a sequence from a spec string.

    Supported forms::

        radial:q,N
        section6:epsilon,N_max
        loglog:epsilon,N_max        (section6 with the loglog stage family)
        explicit:z1,z2,...          (Python complex literals, e.g. 0.5 or 0.3+0.1j)
        file:path.json              (a sequence written by ``generate``)
    """
    family, args = parse_spec(spec, field)
    try:
        if family == "radial":
            q, n = parse_floats(args, field, 2)
            if not n.is_integer():
                raise ConfigError(field, f"N must be an integer, got {n}")
            return gen_radial(q, int(n))
        if family in ("section6", "loglog"):
            eps, n_max = parse_floats(args, field, 2)
            if not n_max.is_integer() or n_max > MAX_N_MAX:
                raise ConfigError(field, f"N_max must be an integer ≤ {MAX_N_MAX}, got {n_max}")
            return gen_section6(eps, int(n_max), family="psi" if family == "section6" else "loglog")
        if family == "explicit":
            try:
                points = [complex(a.replace(" ", "")) for a in args]
            except ValueError:
                raise ConfigError(field, f"cannot parse points {args}")
            return GeneratedSequence.from_points(points)
        if family == "file":
            if len(args) != 1:
                raise ConfigError(field, "expected a single path")
            with open(Path(args[0]), encoding="utf-8") as fh:
                return GeneratedSequence.from_dict(json.load(fh))
    except (ValueError, OSError) as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(field, str(exc))
    raise ConfigError(field, f"unknown generator '{family}'")


__all__ = [
    "GeneratedSequence",
    "TailEstimate",
    "blaschke_sum",
    "separation_constant",
    "RadialGenerator",
    "gen_radial",
    "Section6Generator",
    "gen_section6",
    "stage_count",
    "stage_points",
    "stagewise_phi",
    "stage_contributions",
    "stage_blaschke_sum",
    "tail_bound",
    "far_field_estimate",
    "index_of",
    "PerturbedPairsGenerator",
    "gen_perturbed_pairs",
    "perturbed_pair_residuals",
    "build_sequence",
]

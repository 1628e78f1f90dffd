"""
Growth-condition probes for shapes on log-spaced grids.

    Δ₂:        φ(2t) ≤ M φ(t) + K
    ∇₂:        2 φ(t) ≤ φ(d t)/d       for t ≥ t0, some d > 1
    tilde-Δ₂:  φ(t + 2) ≤ M φ(t) + K

A probe only ever certifies what it saw on its grid.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Dict, Optional, Tuple

import numpy as np

from .shapes import OrliczShape

logger = logging.getLogger(__name__)

M_CAP = 1e6
D_CAP = 16.0
GRID_POINTS = 400
# relative slack for comparisons that are exact in real arithmetic
ROUNDING = 1e-12


@dataclass
class ConditionProbeResult:
    """Outcome of one condition probe"""

    condition: str
    holds: bool
    constants: Dict[str, float] = field(default_factory=dict)
    witness: Optional[float] = None
    grid: Tuple[float, float] = (0.0, 0.0)

    def to_dict(self) -> dict:
        return {
            "condition": self.condition,
            "holds": self.holds,
            "constants": self.constants,
            "witness": self.witness,
            "grid": list(self.grid),
        }


def default_range(shape: OrliczShape, factor: float = 2.0) -> Tuple[float, float]:
    """[max(t0, 1), min(1e12, t_max/factor)]"""
    lo = max(shape.t0, 1.0)
    hi = min(1e12, shape.t_max / factor)
    if hi <= lo:
        hi = lo * 2.0
    return lo, hi


def probe_grid(t_range: Tuple[float, float], points: int = GRID_POINTS) -> np.ndarray:
    lo, hi = t_range
    if not 0.0 < lo < hi:
        raise ValueError(f"probe range must satisfy 0 < lo < hi, got {t_range}")
    return np.geomspace(lo, hi, points)


def delta2_probe(
    shape: OrliczShape,
    t_range: Optional[Tuple[float, float]] = None,
    points: int = GRID_POINTS,
    cap: float = M_CAP,
) -> ConditionProbeResult:
    """
    Fit the least M (with K = 0) such that φ(2t) ≤ M φ(t) on the grid.

    The witness is the grid point where φ(2t)/φ(t) peaks.
    """
    t_range = t_range or default_range(shape, 2.0)
    t = probe_grid(t_range, points)
    with np.errstate(over="ignore", invalid="ignore"):
        ratio = np.asarray(shape.value(2.0 * t), dtype=float) / np.asarray(shape.value(t), dtype=float)
    ratio = np.where(np.isfinite(ratio), ratio, math.inf)
    worst = int(np.argmax(ratio))
    M = float(ratio[worst]) * (1.0 + ROUNDING)
    holds = M <= cap
    logger.debug("Δ₂ probe on %s: M=%.6g at t=%.6g", shape.describe(), M, t[worst])
    return ConditionProbeResult(
        condition="delta2",
        holds=holds,
        constants={"M": M, "K": 0.0} if holds else {},
        witness=float(t[worst]),
        grid=tuple(t_range),
    )


def nabla2_probe(
    shape: OrliczShape,
    t_range: Optional[Tuple[float, float]] = None,
    points: int = GRID_POINTS,
    cap: float = D_CAP,
) -> ConditionProbeResult:
    """
    Least d on the grid 1 + j/64 ≤ cap with 2 d φ(t) ≤ φ(d t) at every probed t.

    t0 is reported as the lower end of the range. When no d works, the witness
    is the smallest t where the largest d still fails.
    """
    t_range = t_range or default_range(shape, cap)
    t = probe_grid(t_range, points)
    phi_t = np.asarray(shape.value(t), dtype=float)
    steps = int(round((cap - 1.0) * 64))
    for d in 1.0 + np.arange(1, steps + 1) / 64.0:
        with np.errstate(over="ignore"):
            lhs = 2.0 * d * phi_t
            rhs = np.asarray(shape.value(d * t), dtype=float) * (1.0 + ROUNDING)
        if np.all(lhs <= rhs):
            logger.debug("∇₂ probe on %s: d=%.6g", shape.describe(), d)
            return ConditionProbeResult(
                condition="nabla2",
                holds=True,
                constants={"d": float(d), "t0": float(t_range[0])},
                witness=float(t[int(np.argmax(lhs / rhs))]),
                grid=tuple(t_range),
            )
    failing = np.flatnonzero(lhs > rhs)
    return ConditionProbeResult(
        condition="nabla2",
        holds=False,
        witness=float(t[failing[0]]),
        grid=tuple(t_range),
    )


def tilde_delta2_probe(
    shape: OrliczShape,
    t_range: Optional[Tuple[float, float]] = None,
    points: int = GRID_POINTS,
    cap: float = M_CAP,
) -> ConditionProbeResult:
    """
    φ(t + 2) ≤ M φ(t) + K with M the largest ratio above the range start
    and K = φ(t_start + 2), which covers every t below the start.
    """
    t_range = t_range or default_range(shape, 2.0)
    lo, hi = t_range
    t = probe_grid((lo, max(hi - 2.0, lo * 1.5)), points)
    with np.errstate(over="ignore", invalid="ignore"):
        ratio = np.asarray(shape.value(t + 2.0), dtype=float) / np.asarray(shape.value(t), dtype=float)
    ratio = np.where(np.isfinite(ratio), ratio, math.inf)
    worst = int(np.argmax(ratio))
    M = float(ratio[worst]) * (1.0 + ROUNDING)
    K = float(shape.value(lo + 2.0))
    holds = M <= cap and math.isfinite(K)
    return ConditionProbeResult(
        condition="tilde_delta2",
        holds=holds,
        constants={"M": M, "K": K} if holds else {},
        witness=float(t[worst]),
        grid=tuple(t_range),
    )


def is_strongly_convex(shape: OrliczShape, t_range: Optional[Tuple[float, float]] = None) -> bool:
    """Superlinear growth (φ(t)/t increasing without a slope bound) and tilde-Δ₂ on the grid"""
    if not shape.is_superlinear():
        return False
    t = probe_grid(t_range or default_range(shape, 2.0))
    with np.errstate(over="ignore"):
        slope = np.asarray(shape.value(t), dtype=float) / t
    growing = bool(np.all(np.diff(slope) >= -ROUNDING * np.abs(slope[1:])) and slope[-1] > slope[0])
    return growing and tilde_delta2_probe(shape, t_range).holds

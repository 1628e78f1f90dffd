"""
Boundary weights and disk measures: piecewise-constant ArcWeight on the circle,
finite atomic DiscreteMeasure in the disk, and shadow weights of sequences.
"""

import json
import logging
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from ..geometry.disk import TWO_PI, as_complex
from ..utils.helpers import parse_floats, parse_spec
from ..utils.numerics import pairwise_sum
from ..utils.validators import ConfigError

logger = logging.getLogger(__name__)

SNAP_ATOL = 1e-14
DEFAULT_SHADOW_C = math.pi


@dataclass(frozen=True)
class ArcWeight:
    """
    w ≥ 0 on the circle, constant on right-open arcs [b_i, b_{i+1}).

    The last arc wraps from b_{m-1} to b_0 + 2π.
    """

    breakpoints: Tuple[float, ...]
    values: Tuple[float, ...]

    def __post_init__(self):
        b = tuple(float(x) for x in self.breakpoints)
        v = tuple(float(x) for x in self.values)
        object.__setattr__(self, "breakpoints", b)
        object.__setattr__(self, "values", v)
        if len(b) == 0 or len(b) != len(v):
            raise ValueError("ArcWeight needs as many values as breakpoints (at least one)")
        if any(not 0.0 <= x < TWO_PI for x in b):
            raise ValueError("breakpoints must lie in [0, 2π)")
        if any(y <= x for x, y in zip(b, b[1:])):
            raise ValueError("breakpoints must be strictly increasing")
        if any(not (math.isfinite(x) and x >= 0.0) for x in v):
            raise ValueError("ArcWeight values must be finite and ≥ 0")

    @classmethod
    def constant(cls, value: float) -> "ArcWeight":
        return cls((0.0,), (value,))

    @classmethod
    def from_pieces(cls, starts: Sequence[float], values: Sequence[float], atol: float = SNAP_ATOL) -> "ArcWeight":
        """
        Canonical weight from arc start angles (any order, any real angles).

        Starts closer than ``atol`` are merged (the later arc wins), 0 is always a
        breakpoint and equal neighbours are fused.
        """
        starts = np.mod(np.asarray(starts, dtype=float), TWO_PI)
        starts = np.where(starts > TWO_PI - atol, 0.0, starts)
        values = np.asarray(values, dtype=float)
        order = np.argsort(starts, kind="stable")
        starts, values = starts[order], values[order]

        kept_b: List[float] = []
        kept_v: List[float] = []
        for b, v in zip(starts, values):
            if kept_b and b - kept_b[-1] <= atol:
                kept_v[-1] = v
                continue
            kept_b.append(0.0 if b <= atol else float(b))
            kept_v.append(float(v))

        if kept_b[0] != 0.0:
            kept_b.insert(0, 0.0)
            kept_v.insert(0, kept_v[-1])

        merged_b, merged_v = [kept_b[0]], [kept_v[0]]
        for b, v in zip(kept_b[1:], kept_v[1:]):
            if v == merged_v[-1]:
                continue
            merged_b.append(b)
            merged_v.append(v)
        return cls(tuple(merged_b), tuple(merged_v))

    @classmethod
    def indicator(cls, theta1: float, theta2: float, value: float = 1.0) -> "ArcWeight":
        """value·χ of the arc [θ1, θ2) taken counterclockwise"""
        length = theta2 - theta1
        if length <= 0.0:
            return cls.constant(0.0)
        if length >= TWO_PI:
            return cls.constant(value)
        start = theta1 % TWO_PI
        end = start + length
        if end <= TWO_PI:
            return cls.from_pieces([0.0, start, end], [0.0, value, 0.0])
        return cls.from_pieces([0.0, end - TWO_PI, start], [value, 0.0, value])

    @classmethod
    def centered_indicator(cls, measure: float, value: float = 1.0) -> "ArcWeight":
        """Indicator of the arc of normalized measure ``measure`` centred at angle 0"""
        if not 0.0 <= measure <= 1.0:
            raise ValueError(f"arc measure must lie in [0, 1], got {measure}")
        return cls.indicator(-math.pi * measure, math.pi * measure, value)

    @property
    def lengths(self) -> np.ndarray:
        b = np.asarray(self.breakpoints)
        return np.diff(np.append(b, b[0] + TWO_PI))

    def samples(self) -> Tuple[np.ndarray, np.ndarray]:
        """(values, arc masses) with masses = length/2π"""
        return np.asarray(self.values), self.lengths / TWO_PI

    def arcs(self) -> List[Tuple[float, float, float]]:
        b = list(self.breakpoints) + [self.breakpoints[0] + TWO_PI]
        return [(b[i], b[i + 1], self.values[i]) for i in range(len(self.values))]

    def __call__(self, theta):
        t = np.mod(np.asarray(theta, dtype=float), TWO_PI)
        idx = np.searchsorted(np.asarray(self.breakpoints), t, side="right") - 1
        out = np.asarray(self.values)[np.mod(idx, len(self.values))]
        return float(out) if np.ndim(theta) == 0 else out

    @property
    def total_mass(self) -> float:
        values, masses = self.samples()
        return pairwise_sum(values * masses)

    def __add__(self, other: "ArcWeight") -> "ArcWeight":
        starts = sorted(set(self.breakpoints) | set(other.breakpoints))
        values = [self(b) + other(b) for b in starts]
        return ArcWeight.from_pieces(starts, values)

    def scaled(self, factor: float) -> "ArcWeight":
        if factor < 0.0:
            raise ValueError("weights can only be scaled by factors ≥ 0")
        return ArcWeight.from_pieces(self.breakpoints, [factor * v for v in self.values])

    def to_dict(self) -> Dict[str, Any]:
        return {"breakpoints": list(self.breakpoints), "values": list(self.values)}

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "ArcWeight":
        return cls(tuple(data["breakpoints"]), tuple(data["values"]))

    def to_frame(self) -> pd.DataFrame:
        rows = [{"theta_start[rad]": a, "theta_end[rad]": b, "value": v} for a, b, v in self.arcs()]
        return pd.DataFrame(rows, columns=["theta_start[rad]", "theta_end[rad]", "value"])


@dataclass(frozen=True)
class DiscreteMeasure:
    """μ = Σ m_i δ_{z_i} with z_i in the open disk and m_i > 0"""

    atoms: np.ndarray
    masses: np.ndarray

    def __post_init__(self):
        atoms = np.array([as_complex(z) for z in np.ravel(self.atoms)], dtype=complex)
        masses = np.array(self.masses, dtype=float).ravel()
        if atoms.size != masses.size:
            raise ValueError(f"{atoms.size} atoms but {masses.size} masses")
        if atoms.size and np.max(np.abs(atoms)) >= 1.0:
            raise ValueError("atoms must lie in the open unit disk")
        if np.any(~(masses > 0.0)) or not np.all(np.isfinite(masses)):
            raise ValueError("masses must be finite and > 0")
        atoms.flags.writeable = False
        masses.flags.writeable = False
        object.__setattr__(self, "atoms", atoms)
        object.__setattr__(self, "masses", masses)

    @classmethod
    def delta(cls, z=0.0, mass: float = 1.0) -> "DiscreteMeasure":
        return cls(np.array([as_complex(z)]), np.array([mass]))

    @classmethod
    def on_sequence(cls, seq, coefficients: Sequence[float]) -> "DiscreteMeasure":
        """Σ c_λ δ_λ over the points with c_λ > 0"""
        c = np.asarray(coefficients, dtype=float)
        keep = c > 0.0
        return cls(seq.complex_points[keep], c[keep])

    def __len__(self) -> int:
        return int(self.atoms.size)

    @property
    def total_mass(self) -> float:
        return pairwise_sum(self.masses)

    def scaled(self, factor: float) -> "DiscreteMeasure":
        return DiscreteMeasure(self.atoms, self.masses * factor)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "atoms": [[float(z.real), float(z.imag)] for z in self.atoms],
            "masses": [float(m) for m in self.masses],
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "DiscreteMeasure":
        atoms = np.array([complex(re, im) for re, im in data["atoms"]], dtype=complex)
        return cls(atoms, np.array(data["masses"], dtype=float))


def shadow_touch_constant(n: int) -> float:
    """The c for which the shadows of neighbouring stage-n points just touch"""
    spacing = TWO_PI / 2.0 ** n
    return 0.5 * spacing / 2.0 ** (-n)


def shadow_weight(seq, c0: float = 1.0, c: float = DEFAULT_SHADOW_C, atol: float = SNAP_ATOL) -> ArcWeight:
    """
    u = c0 Σ χ_{I_λ}, I_λ = {e^{it} : |t - arg λ| ≤ c(1 - |λ|)}.

    Overlaps add. Built by an event sweep over arc ends with integer coverage
    counts, so values are exact multiples of c0.
    """
    if not c0 > 0.0 or not c > 0.0:
        raise ValueError(f"shadow constants must be > 0, got c0={c0}, c={c}")
    points = seq.complex_points if hasattr(seq, "complex_points") else np.array([as_complex(p) for p in seq])
    defects = getattr(seq, "defects", None)
    if defects is None:
        defects = 1.0 - np.abs(points)

    full = 0
    angles: List[float] = []
    deltas: List[int] = []
    for z, d in zip(points, defects):
        half = c * float(d)
        if half >= math.pi:
            full += 1
            continue
        center = math.atan2(z.imag, z.real) if z != 0 else 0.0
        start = (center - half) % TWO_PI
        if start >= TWO_PI - atol:
            start = 0.0
        end = start + 2.0 * half
        angles.append(start)
        deltas.append(1)
        if end <= TWO_PI - atol:
            angles.append(end)
            deltas.append(-1)
        elif end > TWO_PI + atol:
            angles.extend([0.0, end - TWO_PI])
            deltas.extend([1, -1])

    if not angles:
        return ArcWeight.constant(c0 * full)

    angles_arr = np.asarray(angles)
    angles_arr = np.where(angles_arr <= atol, 0.0, angles_arr)
    order = np.argsort(angles_arr, kind="stable")
    angles_arr = angles_arr[order]
    deltas_arr = np.asarray(deltas, dtype=np.int64)[order]

    new_cluster = np.concatenate([[True], np.diff(angles_arr) > atol])
    cluster_id = np.cumsum(new_cluster) - 1
    starts = angles_arr[new_cluster]
    net = np.zeros(starts.size, dtype=np.int64)
    np.add.at(net, cluster_id, deltas_arr)
    coverage = full + np.cumsum(net)

    if starts[0] != 0.0:
        starts = np.concatenate([[0.0], starts])
        coverage = np.concatenate([[full], coverage])
    if np.any(coverage < 0):
        raise RuntimeError("negative coverage in shadow sweep")
    logger.debug("shadow weight: %d arcs, max coverage %d", starts.size, int(coverage.max()))
    return ArcWeight.from_pieces(starts, c0 * coverage.astype(float), atol=atol)


def weight_from_spec(spec: str, seq=None, field: str = "weight") -> ArcWeight:
    """
    Parse a weight spec::

        zero   constant:c   indicator:a   arc:theta1,theta2[,value]
        shadow:c0[,c]   (needs a sequence)   file:path.json
    """
    family, args = parse_spec(spec, field)
    try:
        if family == "zero":
            return ArcWeight.constant(0.0)
        if family == "constant":
            (value,) = parse_floats(args, field, 1)
            return ArcWeight.constant(value)
        if family == "indicator":
            (measure,) = parse_floats(args, field, 1)
            return ArcWeight.centered_indicator(measure)
        if family == "arc":
            values = parse_floats(args, field)
            if len(values) not in (2, 3):
                raise ConfigError(field, "arc takes theta1, theta2 and an optional value")
            return ArcWeight.indicator(*values)
        if family == "shadow":
            if seq is None:
                raise ConfigError(field, "shadow weights need a sequence (--gen)")
            values = parse_floats(args, field) or [1.0]
            return shadow_weight(seq, *values)
        if family == "file":
            with open(Path(args[0]), encoding="utf-8") as fh:
                return ArcWeight.from_dict(json.load(fh))
    except ConfigError:
        raise
    except (ValueError, OSError, KeyError, IndexError) as exc:
        raise ConfigError(field, str(exc))
    raise ConfigError(field, f"unknown weight family '{family}'")


def measure_from_spec(spec: str, field: str = "measure") -> DiscreteMeasure:
    """
    Parse a measure spec::

        delta:z[,mass]          atoms:z1/m1,z2/m2,...          file:path.json
    """
    family, args = parse_spec(spec, field)
    try:
        if family == "delta":
            if not args:
                raise ConfigError(field, "delta needs a point")
            mass = float(args[1]) if len(args) > 1 else 1.0
            return DiscreteMeasure.delta(complex(args[0].replace(" ", "")), mass)
        if family == "atoms":
            pairs = [a.split("/") for a in args]
            if not pairs or any(len(p) != 2 for p in pairs):
                raise ConfigError(field, "atoms entries must look like z/mass")
            atoms = np.array([complex(p[0].replace(" ", "")) for p in pairs])
            masses = np.array([float(p[1]) for p in pairs])
            return DiscreteMeasure(atoms, masses)
        if family == "file":
            with open(Path(args[0]), encoding="utf-8") as fh:
                return DiscreteMeasure.from_dict(json.load(fh))
    except ConfigError:
        raise
    except (ValueError, OSError, KeyError, IndexError) as exc:
        raise ConfigError(field, str(exc))
    raise ConfigError(field, f"unknown measure family '{family}'")

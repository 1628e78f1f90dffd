"""
Finite truncations of Blaschke sequences and their global diagnostics
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence

import numpy as np
import pandas as pd

from ..geometry.disk import DiskPoint, as_complex, pseudo_distance_array
from ..utils.numerics import pairwise_sum

logger = logging.getLogger(__name__)


def _frozen(array: Optional[np.ndarray], dtype) -> Optional[np.ndarray]:
    if array is None:
        return None
    out = np.array(array, dtype=dtype).ravel()
    out.flags.writeable = False
    return out


@dataclass(frozen=True)
class GeneratedSequence:
    """
    A finite truncation of a Blaschke sequence plus generator metadata.

    ``defects`` holds 1-|λ| exactly when the generator knows it (dyadic radii);
    ``stages`` holds the generation stage of each point (-1 where meaningless).
    """

    complex_points: np.ndarray
    generator: str = "explicit"
    params: Dict[str, Any] = field(default_factory=dict)
    defects: Optional[np.ndarray] = None
    stages: Optional[np.ndarray] = None

    def __post_init__(self):
        points = _frozen(self.complex_points, complex)
        object.__setattr__(self, "complex_points", points)
        object.__setattr__(self, "defects", _frozen(self.defects, float))
        object.__setattr__(self, "stages", _frozen(self.stages, np.int64))

        if not np.all(np.isfinite(points)):
            raise ValueError("sequence contains non-finite coordinates")
        if points.size and np.max(np.abs(points)) >= 1.0:
            raise ValueError("sequence points must lie in the open unit disk")
        for name in ("defects", "stages"):
            extra = getattr(self, name)
            if extra is not None and extra.size != points.size:
                raise ValueError(f"{name} has {extra.size} entries for {points.size} points")
        if self.defects is not None and np.any(self.defects <= 0.0):
            raise ValueError("defects 1-|λ| must be positive")
        if not math.isfinite(blaschke_sum(self)):
            raise ValueError("truncation violates the Blaschke condition")

    def __len__(self) -> int:
        return int(self.complex_points.size)

    @classmethod
    def from_points(cls, points: Sequence, generator: str = "explicit", **params) -> "GeneratedSequence":
        values = np.array([as_complex(p) for p in points], dtype=complex)
        return cls(values, generator=generator, params=dict(params))

    @property
    def points(self) -> List[DiskPoint]:
        return [DiskPoint(float(z.real), float(z.imag)) for z in self.complex_points]

    @property
    def stage_of(self) -> Dict[int, int]:
        if self.stages is None:
            return {}
        return {i: int(s) for i, s in enumerate(self.stages) if s >= 0}

    def one_minus_sq(self) -> np.ndarray:
        """1 - |λ|² for every point, exact when defects are known"""
        if self.defects is not None:
            return self.defects * (2.0 - self.defects)
        r = np.abs(self.complex_points)
        return (1.0 - r) * (1.0 + r)

    def subset(self, indices: Sequence[int], generator: Optional[str] = None) -> "GeneratedSequence":
        """The points at ``indices`` (kept in the given order) with metadata carried over"""
        idx = np.asarray(list(indices), dtype=np.int64)
        return GeneratedSequence(
            self.complex_points[idx],
            generator=generator or self.generator,
            params={**self.params, "subset_of": self.generator, "size": int(idx.size)},
            defects=None if self.defects is None else self.defects[idx],
            stages=None if self.stages is None else self.stages[idx],
        )

    def without(self, index: int) -> "GeneratedSequence":
        keep = [i for i in range(len(self)) if i != index]
        return self.subset(keep)

    def to_frame(self) -> pd.DataFrame:
        stages = self.stages if self.stages is not None else np.full(len(self), -1)
        return pd.DataFrame({
            "re": self.complex_points.real,
            "im": self.complex_points.imag,
            "stage": stages,
        })

    def to_dict(self) -> Dict[str, Any]:
        data = {
            "generator": self.generator,
            "params": self.params,
            "points": [[float(z.real), float(z.imag)] for z in self.complex_points],
        }
        if self.defects is not None:
            data["defects"] = [float(d) for d in self.defects]
        if self.stages is not None:
            data["stages"] = [int(s) for s in self.stages]
        return data

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "GeneratedSequence":
        points = np.array([complex(re, im) for re, im in data.get("points", [])], dtype=complex)
        return cls(
            points,
            generator=data.get("generator", "explicit"),
            params=dict(data.get("params", {})),
            defects=data.get("defects"),
            stages=data.get("stages"),
        )


@dataclass(frozen=True)
class TailEstimate:
    """
    Control of the stages a truncation leaves out, at one evaluation point.

    ``bound`` is a rigorous upper bound on the omitted contribution to φ_Λ;
    ``estimate`` and ``uncertainty`` give its analytic value where available.
    """

    J_max: int
    bound: float
    constant: float = 0.0
    estimate: float = 0.0
    uncertainty: float = 0.0

    def __post_init__(self):
        if not self.bound >= 0.0:
            raise ValueError(f"tail bound must be ≥ 0, got {self.bound}")

    def to_dict(self) -> Dict[str, float]:
        return {
            "J_max": self.J_max,
            "bound": self.bound,
            "constant": self.constant,
            "estimate": self.estimate,
            "uncertainty": self.uncertainty,
        }


def blaschke_sum(seq) -> float:
    """Σ (1 - |λ|²) over the truncation"""
    if isinstance(seq, GeneratedSequence):
        values = seq.one_minus_sq()
    else:
        z = np.array([as_complex(p) for p in seq], dtype=complex)
        r = np.abs(z)
        values = (1.0 - r) * (1.0 + r)
    return pairwise_sum(values)


def separation_constant(seq, chunk: int = 512) -> float:
    """
    inf over distinct pairs of ρ(λ, μ); 1.0 for fewer than two points.

    Brute force over all ordered pairs, so the value does not depend on point order.
    """
    if isinstance(seq, GeneratedSequence):
        z = seq.complex_points
    else:
        z = np.array([as_complex(p) for p in seq], dtype=complex)
    if z.size < 2:
        return 1.0

    best = math.inf
    for start in range(0, z.size, chunk):
        rows = z[start:start + chunk]
        rho = pseudo_distance_array(rows[:, None], z[None, :])
        rows_idx = np.arange(start, start + rows.size)
        rho[np.arange(rows.size), rows_idx] = np.inf
        best = min(best, float(np.min(rho)))
    return best

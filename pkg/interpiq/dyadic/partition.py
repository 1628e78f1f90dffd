"""
Four-family splitting of a sequence along the dyadic coloring, and per-square minimizers
"""

import logging
import math
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np

from ..geometry.disk import phi_all
from .squares import DyadicSquare, color_class, occupied_squares

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SquareMinimizer:
    """Point of a part minimizing |B_λ(λ)| (full product) inside one occupied square"""

    square: DyadicSquare
    index: int
    point: complex
    phi: float

    @property
    def m(self) -> float:
        return math.exp(-self.phi)

    def to_dict(self) -> dict:
        return {
            "n": self.square.index.n,
            "k": self.square.index.k,
            "index": self.index,
            "re": self.point.real,
            "im": self.point.imag,
            "phi_lambda": self.phi,
            "m": self.m,
        }


def split4(seq) -> Tuple:
    """
    Partition a sequence by the color class of each point's square.

    Returns four GeneratedSequence parts (classes 1..4), each keeping the input order.
    """
    buckets: List[List[int]] = [[], [], [], []]
    for square, members in occupied_squares(seq).items():
        buckets[color_class(square) - 1].extend(members)
    parts = []
    for color, members in enumerate(buckets, start=1):
        parts.append(seq.subset(sorted(members), generator=f"{seq.generator}/class{color}"))
    logger.debug("split4 sizes: %s", [len(p) for p in parts])
    return tuple(parts)


def per_square_minimizer(
    part,
    full,
    parallelism: int = 1,
    phi: Optional[np.ndarray] = None,
) -> List[SquareMinimizer]:
    """
    For each occupied square of ``part``, its point with the largest φ_Λ
    computed against the full sequence.

    ``phi`` may carry φ_Λ of ``full`` in its order, so several parts of one
    sequence share a single evaluation. Ties go to the point that comes first
    in the full sequence's order, so the output does not depend on how ``part``
    is ordered. Squares are listed by (n, k).
    """
    index_of = {complex(z): i for i, z in enumerate(full.complex_points)}
    full_indices = []
    for z in part.complex_points:
        key = complex(z)
        if key not in index_of:
            raise ValueError(f"point {key} of the part is not in the full sequence")
        full_indices.append(index_of[key])

    if phi is None:
        phis = phi_all(full, parallelism=parallelism)
    else:
        phis = np.asarray(phi, dtype=float)
        if phis.size != len(full):
            raise ValueError(f"{phis.size} φ values for {len(full)} points")
    results = []
    for square, members in sorted(occupied_squares(part).items()):
        candidates = sorted(full_indices[m] for m in members)
        best = max(candidates, key=lambda i: (phis[i], -i))
        results.append(SquareMinimizer(
            square=DyadicSquare(square),
            index=best,
            point=complex(full.complex_points[best]),
            phi=float(phis[best]),
        ))
    return results

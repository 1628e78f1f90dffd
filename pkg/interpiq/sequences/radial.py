"""
Radial geometric sequences λ_n = 1 - qⁿ, the canonical Carleson test case
"""

import logging
from typing import Any, Dict

import numpy as np

from .base import GeneratedSequence

logger = logging.getLogger(__name__)


class RadialGenerator:
    """Generator for points 1 - qⁿ, n = 1..N, on the positive real axis"""

    tag = "radial"

    def __init__(self, q: float, N: int):
        if not 0.0 < q < 1.0:
            raise ValueError(f"radial ratio q must lie in (0, 1), got {q}")
        if N < 0:
            raise ValueError(f"radial length N must be ≥ 0, got {N}")
        self.q = float(q)
        self.N = int(N)

    @property
    def params(self) -> Dict[str, Any]:
        return {"q": self.q, "N": self.N}

    def generate(self) -> GeneratedSequence:
        """
        Build the truncation.

        Returns:
            GeneratedSequence with exact defects qⁿ and stage n for each point
        """
        stages = np.arange(1, self.N + 1, dtype=np.int64)
        defects = self.q ** stages.astype(float)
        if np.any(defects <= 0.0) or np.any(1.0 - defects >= 1.0):
            raise ValueError(f"q^N underflows for q={self.q}, N={self.N}")
        points = (1.0 - defects).astype(complex)
        logger.debug("radial q=%s: %d points", self.q, self.N)
        return GeneratedSequence(points, generator=self.tag, params=self.params, defects=defects, stages=stages)


def gen_radial(q: float, N: int) -> GeneratedSequence:
    return RadialGenerator(q, N).generate()

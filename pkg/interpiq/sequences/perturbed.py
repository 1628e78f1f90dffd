"""
Doubling a base sequence with radial partners μ_n at prescribed density ρ(λ_n, μ_n) = e^{-η_n}
"""

import logging
import math
from typing import Sequence

import numpy as np

from ..geometry.disk import phi_all, pseudo_distance_array
from .base import GeneratedSequence

logger = logging.getLogger(__name__)


class PerturbedPairsGenerator:
    """Adds, for every base point, a partner further out on the same radius"""

    tag = "perturbed_pairs"

    def __init__(self, base: GeneratedSequence, eta: Sequence[float]):
        eta = np.asarray(eta, dtype=float).ravel()
        if eta.size != len(base):
            raise ValueError(f"need one η per base point: {eta.size} given for {len(base)} points")
        if np.any(~(eta > 0.0)):
            raise ValueError("every η_n must be > 0")
        self.base = base
        self.eta = eta

    def _check_interleaving(self, targets: np.ndarray) -> None:
        z = self.base.complex_points
        if z.size < 2:
            return
        rho = pseudo_distance_array(z[:, None], z[None, :])
        np.fill_diagonal(rho, np.inf)
        nearest = rho.min(axis=1)
        if np.any(nearest == 0.0):
            raise ValueError("base points must be distinct")
        bad = np.flatnonzero(targets >= nearest)
        if bad.size:
            i = int(bad[0])
            raise ValueError(
                f"pair {i} would interleave: e^-η = {targets[i]:.6g} ≥ distance {nearest[i]:.6g} to the nearest base point"
            )

    def generate(self) -> GeneratedSequence:
        """
        Build the doubled sequence λ_1, μ_1, λ_2, μ_2, ...

        With t = e^{-η} the partner of λ = r e^{iθ} is s e^{iθ}, s = (r + t)/(1 + r t),
        so that ρ(λ, μ) = t; its defect is (1 - r)(1 - t)/(1 + r t).
        """
        targets = np.exp(-self.eta)
        self._check_interleaving(targets)

        z = self.base.complex_points
        r = np.abs(z)
        d = self.base.defects if self.base.defects is not None else 1.0 - r
        one_minus_t = -np.expm1(-self.eta)
        partner_defects = d * one_minus_t / (1.0 + r * targets)
        directions = np.where(r > 0.0, z / np.where(r > 0.0, r, 1.0), 1.0 + 0.0j)
        partners = (1.0 - partner_defects) * directions

        same = np.flatnonzero(partners == z)
        if same.size:
            raise ValueError(f"η_{int(same[0])} = {self.eta[same[0]]} is too large to separate the pair in floating point")

        points = np.empty(2 * z.size, dtype=complex)
        points[0::2] = z
        points[1::2] = partners
        defects = np.empty(2 * z.size, dtype=float)
        defects[0::2] = d
        defects[1::2] = partner_defects
        stages = None
        if self.base.stages is not None:
            stages = np.repeat(self.base.stages, 2)

        logger.debug("perturbed pairs: %d base points doubled", z.size)
        return GeneratedSequence(
            points,
            generator=self.tag,
            params={"base": self.base.generator, "base_params": self.base.params, "eta": [float(e) for e in self.eta]},
            defects=defects,
            stages=stages,
        )


def gen_perturbed_pairs(base: GeneratedSequence, eta: Sequence[float]) -> GeneratedSequence:
    return PerturbedPairsGenerator(base, eta).generate()


def perturbed_pair_residuals(base: GeneratedSequence, eta: Sequence[float], parallelism: int = 1) -> np.ndarray:
    """
    φ_doubled(λ_n) - φ_base(λ_n) - η_n for every base point.

    The residual is the contribution of the other partners μ_m, m ≠ n, hence ≥ 0.
    """
    doubled = gen_perturbed_pairs(base, eta)
    phi_doubled = phi_all(doubled, parallelism=parallelism)[0::2]
    phi_base = phi_all(base, parallelism=parallelism)
    residuals = phi_doubled - phi_base - np.asarray(eta, dtype=float)
    if residuals.size and not math.isfinite(float(np.max(residuals))):
        logger.warning("non-finite residual in perturbed pairs")
    return residuals

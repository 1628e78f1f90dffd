"""
Harnack comparison constants for positive harmonic functions on dyadic squares
"""

import logging
import math
from typing import Union

import numpy as np

from ..dyadic.squares import DyadicSquare
from ..geometry.disk import as_complex, pseudo_distance_array

logger = logging.getLogger(__name__)

# pseudo-hyperbolic distances at or above this are treated as 1
RHO_CAP = 1.0 - 1e-15


def harnack_constant(delta: float) -> float:
    """
    K(δ) = (1 + δ)/(1 - δ).

    If ρ(u, v) ≤ δ then h(v)/K ≤ h(u) ≤ K h(v) for every positive harmonic h.
    """
    if not 0.0 <= delta < 1.0:
        raise ValueError(f"Harnack constant needs 0 ≤ δ < 1, got {delta}")
    return (1.0 + delta) / (1.0 - delta)


def hyperbolic_diameter(points) -> float:
    """max artanh ρ(z, w) over a finite point set"""
    pts = np.asarray([as_complex(p) for p in np.ravel(points)], dtype=complex)
    if pts.size < 2:
        return 0.0
    rho = pseudo_distance_array(pts[:, None], pts[None, :])
    return float(np.arctanh(min(float(np.max(rho)), RHO_CAP)))


def square_diameter(square: DyadicSquare, per_side: int = 64) -> float:
    """
    Upper bound on the hyperbolic diameter of a square.

    The maximum of ρ(z, ·) over the square is attained on its boundary. The
    metric |dz|/(1-|z|²) is Lipschitz-controlled by 1/(1 - r_outer²), so a
    sample spacing h adds at most h/(1 - r_outer²) for the two endpoints.
    """
    samples = square.boundary_samples(per_side)
    radial = (square.r_outer - square.r_inner) / (per_side - 1)
    angular = square.r_outer * (square.theta_end - square.theta_start) / (per_side - 1)
    slack = max(radial, angular) / (1.0 - square.r_outer ** 2)
    return hyperbolic_diameter(samples) + slack


def harnack_factor(region: Union[DyadicSquare, np.ndarray, list], per_side: int = 64) -> float:
    """
    c_H ≥ 1 with h(z') ≤ c_H h(z) for all z, z' in the region and positive harmonic h.

    Args:
        region: a DyadicSquare (bounded through its sampled boundary plus slack)
            or a finite collection of points (exact pairwise maximum)
        per_side: boundary samples per side of a square

    Returns:
        e^{2β} with β the hyperbolic diameter, i.e. (1+D)/(1-D) for D = tanh β
    """
    if isinstance(region, DyadicSquare):
        beta = square_diameter(region, per_side)
    else:
        beta = hyperbolic_diameter(region)
    c_h = math.exp(2.0 * beta)
    logger.debug("harnack factor: diameter %.6g, c_H %.6g", beta, c_h)
    return c_h

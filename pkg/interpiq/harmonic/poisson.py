"""
Poisson kernel, exact Poisson extensions of arc weights and the weight/measure pairing
"""

import logging
import math
from typing import Dict, Sequence

import numpy as np
from scipy.integrate import quad

from ..geometry.arcs import arc_measure
from ..geometry.disk import TWO_PI, as_complex
from ..orlicz.norms import modular
from ..utils.numerics import pairwise_sum
from .weights import ArcWeight, DiscreteMeasure

logger = logging.getLogger(__name__)


def poisson_kernel(z, zeta):
    """
    P_z(ζ) = (1 - |z|²)/|ζ - z|², normalized so that ∫P_z dm = 1.

    ``zeta`` is an angle (radians) or a BoundaryAngle; broadcasts over arrays.
    """
    zeta = getattr(zeta, "theta", zeta)
    z_arr = np.asarray(z, dtype=complex)
    theta = np.asarray(zeta, dtype=float)
    r = np.abs(z_arr)
    out = (1.0 - r) * (1.0 + r) / np.abs(np.exp(1j * theta) - z_arr) ** 2
    return float(out) if out.ndim == 0 else out


def harmonic_measure_arc(z, theta1: float, theta2: float) -> float:
    """
    ω(z, [θ1, θ2)) = ∫_arc P_z dm in closed form.

    θ2 < θ1 is read as the arc wrapping through angle 0.
    """
    if theta2 < theta1:
        theta2 += TWO_PI
    return float(arc_measure(as_complex(z), theta1, theta2))


def _arc_matrix(w: ArcWeight, zs: np.ndarray) -> np.ndarray:
    arcs = w.arcs()
    starts = np.array([a[0] for a in arcs])
    ends = np.array([a[1] for a in arcs])
    return arc_measure(zs[:, None], starts[None, :], ends[None, :])


def poisson_extension(w: ArcWeight, z) -> float:
    """P[w](z) = Σ value_i ω(z, arc_i), exact for arc weights"""
    zs = np.array([as_complex(z)])
    omega = _arc_matrix(w, zs)[0]
    return pairwise_sum(np.asarray(w.values) * omega)


def poisson_extension_many(w: ArcWeight, zs: Sequence, chunk: int = 256) -> np.ndarray:
    """P[w] at many points, each reduced in arc order"""
    zs = np.asarray([as_complex(z) for z in np.ravel(zs)], dtype=complex)
    values = np.asarray(w.values)
    out = np.zeros(zs.size, dtype=float)
    for start in range(0, zs.size, chunk):
        block = zs[start:start + chunk]
        omega = _arc_matrix(w, block)
        out[start:start + block.size] = [pairwise_sum(values * row) for row in omega]
    return out


def pairing(w: ArcWeight, mu: DiscreteMeasure) -> float:
    """∫ P[w] dμ = Σ m_i P[w](z_i), equal to ∫ w B(μ) dm"""
    if len(mu) == 0:
        return 0.0
    extension = poisson_extension_many(w, mu.atoms)
    return pairwise_sum(mu.masses * extension)


def outer_log_modulus(w: ArcWeight, z) -> float:
    """log|f_w(z)| for the outer function f_w = exp(∫(ζ+z)/(ζ-z) w dm), i.e. P[w](z)"""
    return poisson_extension(w, z)


def outer_modular_bound(
    shape,
    w: ArcWeight,
    radii: Sequence[float] = (0.5, 0.9, 0.99),
    samples: int = 512,
) -> Dict[str, float]:
    """
    Sampled check of J_Φ(f_w(r·)) ≤ φ(0) + J_φ(w) on circles of radius r.

    Jensen's inequality for the probability P_z dm gives φ(P[w]) ≤ P[φ(w)],
    whose circle mean is J_φ(w).
    """
    bound = float(shape.value(0.0)) + modular(shape, w)
    theta = (np.arange(samples) + 0.5) * TWO_PI / samples
    worst = 0.0
    for r in radii:
        if not 0.0 <= r < 1.0:
            raise ValueError(f"radius must lie in [0, 1), got {r}")
        logs = poisson_extension_many(w, r * np.exp(1j * theta))
        mean = pairwise_sum(np.asarray(shape.value(np.maximum(logs, 0.0)), dtype=float)) / samples
        worst = max(worst, mean)
    return {"bound": bound, "max_sampled": worst, "holds": bool(worst <= bound * (1.0 + 1e-9) + 1e-12)}


def mean_value(w: ArcWeight) -> float:
    """P[w](0) = ∫ w dm"""
    return w.total_mass


def quadrature_arc_measure(z, theta1: float, theta2: float) -> float:
    """ω(z, [θ1, θ2)) by adaptive quadrature of the kernel (reference path)"""
    z_c = as_complex(z)
    centre = math.atan2(z_c.imag, z_c.real)
    points = [t for t in (centre, centre - TWO_PI, centre + TWO_PI) if theta1 < t < theta2]
    value, error = quad(
        lambda t: poisson_kernel(z_c, t),
        theta1,
        theta2,
        points=points or None,
        limit=500,
        epsabs=1e-14,
        epsrel=1e-13,
    )
    logger.debug("quadrature arc measure %.15g (error estimate %.2g)", value / TWO_PI, error / TWO_PI)
    return value / TWO_PI

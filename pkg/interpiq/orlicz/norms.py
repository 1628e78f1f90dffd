"""
Modulars and norms on the circle with the normalized measure dm = dθ/2π.

A weight is either an object exposing ``samples() -> (values, masses)`` (ArcWeight,
sampled boundary functions) or an explicit pair of arrays.
"""

import logging
import math
from typing import Optional, Tuple

import numpy as np

from ..utils.numerics import (
    DEFAULT_MAX_ITER,
    DEFAULT_RTOL,
    bisect_threshold,
    expand_bracket,
    pairwise_sum,
)
from .shapes import OrliczShape

logger = logging.getLogger(__name__)


def as_samples(weight, masses=None) -> Tuple[np.ndarray, np.ndarray]:
    """Values |w| and nonnegative masses of a weight"""
    if masses is None and hasattr(weight, "samples"):
        values, masses = weight.samples()
    elif masses is None:
        raise ValueError("sampled weights need quadrature masses")
    else:
        values = weight
    values = np.abs(np.asarray(values, dtype=float)).ravel()
    masses = np.asarray(masses, dtype=float).ravel()
    if values.size != masses.size:
        raise ValueError(f"{values.size} values but {masses.size} masses")
    if np.any(masses < 0.0):
        raise ValueError("quadrature masses must be ≥ 0")
    return values, masses


def _modular(shape: OrliczShape, values: np.ndarray, masses: np.ndarray) -> float:
    keep = masses > 0.0
    if not np.any(keep):
        return 0.0
    return pairwise_sum(masses[keep] * np.asarray(shape.value(values[keep]), dtype=float))


def modular(shape: OrliczShape, weight, masses=None) -> float:
    """J_φ(w) = Σ mass · φ(|value|)"""
    values, masses = as_samples(weight, masses)
    return _modular(shape, values, masses)


def luxemburg_norm(
    shape: OrliczShape,
    weight,
    masses=None,
    rtol: float = DEFAULT_RTOL,
    max_iter: int = DEFAULT_MAX_ITER,
) -> float:
    """
    ‖w‖_φ = inf{t > 0 : J_φ(w/t) ≤ 1}

    The returned t always satisfies J_φ(w/t) ≤ 1.

    Raises:
        ConvergenceError: if J_φ(w/t) > 1 up to the overflow guard
    """
    values, masses = as_samples(weight, masses)
    support = (masses > 0.0) & (values > 0.0)
    if not np.any(support):
        return 0.0
    values, masses = values[support], masses[support]

    def fits(t: float) -> bool:
        return _modular(shape, values / t, masses) <= 1.0

    lo, hi = expand_bracket(fits, start=float(np.max(values)), what="luxemburg bracket")
    return bisect_threshold(fits, lo, hi, rtol=rtol, max_iter=max_iter, what="luxemburg norm")


def orlicz_norm(
    shape: OrliczShape,
    weight,
    masses=None,
    rtol: float = DEFAULT_RTOL,
    max_iter: int = DEFAULT_MAX_ITER,
    return_k: bool = False,
):
    """
    Amemiya form inf_{k>0} (1 + J_φ(k w))/k.

    The optimal k solves J_{φ*}(φ′(k|w|)) = 1, written through the Young gap
    x φ′(x) - φ(x) so no conjugate is needed. Applied to φ*, this is the norm
    dual to the Luxemburg norm of L^φ.
    """
    values, masses = as_samples(weight, masses)
    support = (masses > 0.0) & (values > 0.0)
    if not np.any(support):
        return (0.0, math.inf) if return_k else 0.0
    values, masses = values[support], masses[support]

    def saturated(k: float) -> bool:
        gap = np.asarray(shape.young_gap(k * values), dtype=float)
        return pairwise_sum(masses * gap) >= 1.0

    start = 1.0 / float(np.max(values))
    lo, hi = expand_bracket(saturated, start=start, what="orlicz norm bracket")
    k = bisect_threshold(saturated, lo, hi, rtol=rtol, max_iter=max_iter, what="orlicz norm")
    norm = (1.0 + _modular(shape, k * values, masses)) / k
    logger.debug("orlicz norm %.12g at k=%.6g", norm, k)
    return (norm, k) if return_k else norm


def fnorm(
    shape: OrliczShape,
    weight,
    masses=None,
    rtol: float = DEFAULT_RTOL,
    max_iter: int = DEFAULT_MAX_ITER,
) -> float:
    """
    The F-norm ‖f‖_Φ = inf{t > 0 : J_Φ(f/t) ≤ t} with Φ = φ∘log⁺.

    Not homogeneous; distinct from the Luxemburg norm.
    """
    values, masses = as_samples(weight, masses)
    if not np.any((masses > 0.0) & (values > 0.0)):
        return 0.0

    def fits(t: float) -> bool:
        return pairwise_sum(masses * np.asarray(shape.composed(values / t), dtype=float)) <= t

    lo, hi = expand_bracket(fits, start=1.0, what="fnorm bracket")
    if lo == 0.0:
        return 0.0
    return bisect_threshold(fits, lo, hi, rtol=rtol, max_iter=max_iter, what="fnorm")


def inverse_growth(shape: OrliczShape, u: float) -> float:
    """φ⁻¹(u)"""
    if not u >= 0.0:
        raise ValueError(f"inverse_growth needs u ≥ 0, got {u}")
    return float(shape.inverse(float(u)))


def asymptotic_ratio(shape: OrliczShape, u: float) -> float:
    """
    φ⁻¹(u) divided by its leading-order model.

    psi: u / ln^ε u;  loglog: u / (ln ln u)^ε;  power: (p u)^{1/p}.
    """
    inv = inverse_growth(shape, u)
    if shape.family == "psi":
        return inv * math.log(u) ** shape.epsilon / u
    if shape.family == "loglog":
        return inv * math.log(math.log(u)) ** shape.epsilon / u
    if shape.family == "power":
        return inv / (shape.p * u) ** (1.0 / shape.p)
    raise ValueError(f"no growth model for shape family '{shape.family}'")


def pointeval_bound(shape: OrliczShape, c_f: float, z) -> float:
    """Largest log|f(z)| allowed for f with modular constant c_f: φ⁻¹(c_f/(1-|z|))"""
    r = abs(complex(z))
    if r >= 1.0:
        raise ValueError(f"point must lie in the open disk, got |z| = {r!r}")
    if not c_f > 0.0:
        raise ValueError(f"c_f must be > 0, got {c_f}")
    return inverse_growth(shape, c_f / (1.0 - r))


def holder_pairing(u, v, masses) -> float:
    """∫ u v dm on common samples"""
    u = np.asarray(u, dtype=float).ravel()
    v = np.asarray(v, dtype=float).ravel()
    masses = np.asarray(masses, dtype=float).ravel()
    return pairwise_sum(u * v * masses)


def indicator_norm(shape: OrliczShape, measure: float) -> float:
    """‖χ_E‖_φ = 1/φ⁻¹(1/m(E)) in closed form"""
    if not 0.0 < measure <= 1.0:
        raise ValueError(f"arc measure must lie in (0, 1], got {measure}")
    return 1.0 / inverse_growth(shape, 1.0 / measure)


def constant_dual_norm(shape: OrliczShape, kind: str = "orlicz") -> Optional[float]:
    """Dual norm of the constant function 1: φ⁻¹(1) (orlicz) or 1/(φ*)⁻¹(1) (luxemburg)"""
    if kind == "orlicz":
        return inverse_growth(shape, 1.0)
    if kind == "luxemburg":
        return 1.0 / float(shape.conjugate().inverse(1.0))
    if kind == "sup":
        return 1.0
    raise ValueError(f"unknown dual norm kind '{kind}'")

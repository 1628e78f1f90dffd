"""
Unit disk primitives: points, boundary angles, Möbius factors and log-domain
Blaschke products.

All log-moduli are computed as 0.5*log1p(-x) with
x = (1-|mu|^2)(1-|z|^2)/|1-conj(mu) z|^2 when the factor is close to unimodular,
and directly as log|mu-z| - log|1-conj(mu) z| otherwise.
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple, Union

import numpy as np

from ..utils.numerics import pairwise_sum

logger = logging.getLogger(__name__)

TWO_PI = 2.0 * math.pi


def normalize_angle(theta: float) -> float:
    """Map an angle to [0, 2π)"""
    t = math.fmod(float(theta), TWO_PI)
    if t < 0.0:
        t += TWO_PI
    if t >= TWO_PI:
        t = 0.0
    return t


@dataclass(frozen=True)
class DiskPoint:
    """A point of the open unit disk"""

    re: float
    im: float

    def __post_init__(self):
        if not (math.isfinite(self.re) and math.isfinite(self.im)):
            raise ValueError(f"DiskPoint coordinates must be finite, got ({self.re}, {self.im})")
        if math.hypot(self.re, self.im) >= 1.0:
            raise ValueError(f"DiskPoint must satisfy |z| < 1, got |z| = {math.hypot(self.re, self.im)!r}")

    @classmethod
    def from_complex(cls, z: complex) -> "DiskPoint":
        return cls(float(z.real), float(z.imag))

    @classmethod
    def from_polar(cls, r: float, theta: float) -> "DiskPoint":
        return cls(r * math.cos(theta), r * math.sin(theta))

    @property
    def value(self) -> complex:
        return complex(self.re, self.im)

    @property
    def modulus(self) -> float:
        return math.hypot(self.re, self.im)

    @property
    def angle(self) -> "BoundaryAngle":
        return BoundaryAngle(math.atan2(self.im, self.re))

    def to_dict(self) -> dict:
        return {"re": self.re, "im": self.im}


@dataclass(frozen=True)
class BoundaryAngle:
    """A point e^{iθ} of the unit circle, θ normalized to [0, 2π)"""

    theta: float

    def __post_init__(self):
        if not math.isfinite(self.theta):
            raise ValueError(f"BoundaryAngle must be finite, got {self.theta}")
        object.__setattr__(self, "theta", normalize_angle(self.theta))

    @property
    def value(self) -> complex:
        return complex(math.cos(self.theta), math.sin(self.theta))


@dataclass(frozen=True)
class LogModulus:
    """log|B(z)| of a Blaschke product, always ≤ 0"""

    value: float

    def __post_init__(self):
        if math.isnan(self.value):
            raise ValueError("LogModulus cannot be NaN")
        object.__setattr__(self, "value", min(float(self.value), 0.0))

    @property
    def flag(self) -> str:
        return "neg_infinity" if self.value == -math.inf else "finite"

    @property
    def is_finite(self) -> bool:
        return self.value != -math.inf


PointLike = Union[DiskPoint, BoundaryAngle, complex]


def as_complex(z: PointLike) -> complex:
    if isinstance(z, (DiskPoint, BoundaryAngle)):
        return z.value
    return complex(z)


def as_arrays(points) -> Tuple[np.ndarray, Optional[np.ndarray]]:
    """
    Complex coordinates and, when known exactly, the defects 1-|λ| of a point collection.

    Accepts a GeneratedSequence (anything exposing ``complex_points``), a numpy
    array of complex numbers or a list of DiskPoint/complex values.
    """
    if hasattr(points, "complex_points"):
        return points.complex_points, getattr(points, "defects", None)
    if isinstance(points, np.ndarray):
        return points.astype(complex, copy=False).ravel(), None
    return np.array([as_complex(p) for p in points], dtype=complex), None


def _one_minus_sq(z: np.ndarray, defect: Optional[np.ndarray]) -> np.ndarray:
    if defect is not None:
        return defect * (2.0 - defect)
    r = np.abs(z)
    return (1.0 - r) * (1.0 + r)


def log_abs_factors(
    mu: np.ndarray,
    z,
    mu_defect: Optional[np.ndarray] = None,
    z_defect=None,
) -> np.ndarray:
    """
    Elementwise log|b_mu(z)| with numpy broadcasting between ``mu`` and ``z``.

    Exact coincidences give -inf; everything else is finite and ≤ 0.
    """
    mu = np.asarray(mu, dtype=complex)
    z = np.asarray(z, dtype=complex)
    zd = None if z_defect is None else np.asarray(z_defect, dtype=float)

    one_minus_mu = _one_minus_sq(mu, mu_defect)
    one_minus_z = _one_minus_sq(z, zd)
    denom_abs = np.abs(1.0 - np.conj(mu) * z)

    with np.errstate(divide="ignore", invalid="ignore"):
        x = one_minus_mu * one_minus_z / (denom_abs * denom_abs)
        near_unimodular = 0.5 * np.log1p(-np.minimum(x, 0.5))
        direct = np.log(np.abs(mu - z)) - np.log(denom_abs)
    out = np.where(x < 0.5, near_unimodular, direct)
    return np.minimum(out, 0.0)


def mobius_factor(lam: PointLike, z: PointLike) -> complex:
    """
    Elementary Blaschke factor b_λ(z) = (|λ|/λ)(λ - z)/(1 - conj(λ) z).

    Convention: b_0(z) = z.
    """
    lam_c = as_complex(lam)
    z_c = as_complex(z)
    if lam_c == 0:
        return z_c
    return (abs(lam_c) / lam_c) * (lam_c - z_c) / (1.0 - lam_c.conjugate() * z_c)


def pseudo_distance(z: PointLike, w: PointLike) -> float:
    """ρ(z, w) = |z - w| / |1 - conj(w) z|"""
    z_c = as_complex(z)
    w_c = as_complex(w)
    if z_c == w_c:
        return 0.0
    return abs(z_c - w_c) / abs(1.0 - w_c.conjugate() * z_c)


def pseudo_distance_array(z, w) -> np.ndarray:
    """Broadcasting version of pseudo_distance over complex arrays"""
    z = np.asarray(z, dtype=complex)
    w = np.asarray(w, dtype=complex)
    return np.abs(z - w) / np.abs(1.0 - np.conj(w) * z)


def log_blaschke_at(points, z: PointLike, skip: Optional[int] = None) -> LogModulus:
    """
    log|B(z)| = Σ log|b_μ(z)| over the points, optionally omitting one index.

    The skipped point is removed before any arithmetic, so the result is
    bit-identical to evaluating on the shortened list.
    """
    mu, defects = as_arrays(points)
    if skip is not None:
        if not 0 <= skip < mu.size:
            raise IndexError(f"skip index {skip} out of range for {mu.size} points")
        mu = np.delete(mu, skip)
        if defects is not None:
            defects = np.delete(defects, skip)
    if mu.size == 0:
        return LogModulus(0.0)
    logs = log_abs_factors(mu, as_complex(z), mu_defect=defects)
    return LogModulus(pairwise_sum(logs))


def _phi_at(mu: np.ndarray, defects: Optional[np.ndarray], index: int) -> float:
    others = np.delete(mu, index)
    if others.size == 0:
        return 0.0
    other_defects = None if defects is None else np.delete(defects, index)
    z_defect = None if defects is None else defects[index]
    logs = log_abs_factors(others, mu[index], mu_defect=other_defects, z_defect=z_defect)
    return -pairwise_sum(logs)


def phi_lambda(points, index: int) -> float:
    """
    Interpolation density φ_Λ(λ) = log 1/|B_λ(λ)| at ``points[index]``.

    Returns ``math.inf`` when the point is repeated in the list.
    """
    mu, defects = as_arrays(points)
    if not 0 <= index < mu.size:
        raise IndexError(f"index {index} out of range for {mu.size} points")
    value = _phi_at(mu, defects, index)
    if value == math.inf:
        logger.debug("repeated point at index %d: infinite density", index)
    return value


def phi_all(points, parallelism: int = 1) -> np.ndarray:
    """φ_Λ at every point, in input order"""
    mu, defects = as_arrays(points)
    indices = range(mu.size)
    if parallelism <= 1 or mu.size < 64:
        values = [_phi_at(mu, defects, i) for i in indices]
    else:
        with ThreadPoolExecutor(max_workers=parallelism) as pool:
            values = list(pool.map(lambda i: _phi_at(mu, defects, i), indices))
    return np.array(values, dtype=float)


def log_blaschke_many(points, zs: Sequence[complex], chunk: int = 256) -> np.ndarray:
    """log|B(z)| for many evaluation points (no skipping)"""
    mu, defects = as_arrays(points)
    zs = np.asarray(zs, dtype=complex).ravel()
    out = np.zeros(zs.size, dtype=float)
    if mu.size == 0:
        return out
    for start in range(0, zs.size, chunk):
        block = zs[start:start + chunk]
        logs = log_abs_factors(mu[None, :], block[:, None], mu_defect=defects)
        out[start:start + block.size] = [pairwise_sum(row) for row in logs]
    return out

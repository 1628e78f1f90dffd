"""
Whitney dyadic squares Q_{n,k} = {r e^{iθ} : 1-2^{-n} ≤ r < 1-2^{-n-1}, 2πk2^{-n} ≤ θ < 2π(k+1)2^{-n}}
and their four-family coloring.
"""

import logging
import math
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Tuple

import numpy as np
import pandas as pd
from scipy.optimize import minimize

from ..geometry.disk import TWO_PI, DiskPoint, as_complex, normalize_angle, pseudo_distance_array

logger = logging.getLogger(__name__)

MAX_LEVEL = 52


@dataclass(frozen=True, order=True)
class DyadicIndex:
    """Index (n, k) of a dyadic square, 0 ≤ k < 2ⁿ"""

    n: int
    k: int

    def __post_init__(self):
        if self.n < 0 or self.n > MAX_LEVEL:
            raise ValueError(f"dyadic level must lie in 0..{MAX_LEVEL}, got {self.n}")
        if not 0 <= self.k < 2 ** self.n:
            raise ValueError(f"k must satisfy 0 ≤ k < 2^{self.n}, got {self.k}")


@dataclass(frozen=True)
class DyadicSquare:
    """The cell Q_{n,k}, right-open in both radius and angle"""

    index: DyadicIndex

    @classmethod
    def of(cls, n: int, k: int) -> "DyadicSquare":
        return cls(DyadicIndex(n, k))

    @property
    def r_inner(self) -> float:
        return 1.0 - 2.0 ** (-self.index.n) if self.index.n > 0 else 0.0

    @property
    def r_outer(self) -> float:
        return 1.0 - 2.0 ** (-self.index.n - 1)

    @property
    def theta_start(self) -> float:
        return TWO_PI * self.index.k * 2.0 ** (-self.index.n)

    @property
    def theta_end(self) -> float:
        return TWO_PI * (self.index.k + 1) * 2.0 ** (-self.index.n)

    @property
    def center(self) -> complex:
        """z_{n,k}: mid radius, mid angle"""
        r = 0.5 * (self.r_inner + self.r_outer)
        theta = 0.5 * (self.theta_start + self.theta_end)
        return r * complex(math.cos(theta), math.sin(theta))

    def contains(self, z) -> bool:
        return square_of(z) == self.index

    def boundary_samples(self, per_side: int = 64) -> np.ndarray:
        """
        Points on the four sides, the outer side approached at 1 - 1e-15 relative.

        Each side carries ``per_side`` equally spaced samples including corners.
        """
        r0, r1 = self.r_inner, self.r_outer * (1.0 - 1e-15)
        t0, t1 = self.theta_start, self.theta_end
        radii = np.linspace(r0, r1, per_side)
        angles = np.linspace(t0, t1, per_side)
        sides = [
            radii * np.exp(1j * t0),
            radii * np.exp(1j * t1),
            r0 * np.exp(1j * angles),
            r1 * np.exp(1j * angles),
        ]
        return np.concatenate(sides)

    def sample_grid(self, per_side: int = 16) -> np.ndarray:
        radii = np.linspace(self.r_inner, self.r_outer * (1.0 - 1e-15), per_side)
        angles = np.linspace(self.theta_start, self.theta_end, per_side)
        rr, tt = np.meshgrid(radii, angles, indexing="ij")
        return (rr * np.exp(1j * tt)).ravel()

    def to_dict(self) -> Dict[str, float]:
        return {
            "n": self.index.n,
            "k": self.index.k,
            "color": color_class(self.index),
            "r_inner": self.r_inner,
            "r_outer": self.r_outer,
            "theta_start": self.theta_start,
            "theta_end": self.theta_end,
        }


def square_of(z) -> DyadicIndex:
    """
    The unique index with z ∈ Q_{n,k}.

    n = ⌊-log₂(1-r)⌋ (0 when r < 1/2), corrected so that 1-2^{-n} ≤ r < 1-2^{-n-1}
    holds in floating point; k = ⌊θ 2ⁿ/2π⌋ with θ ∈ [0, 2π).
    """
    z_c = as_complex(z)
    r = abs(z_c)
    if r >= 1.0:
        raise ValueError(f"point must lie in the open disk, got |z| = {r!r}")

    if r < 0.5:
        n = 0
    else:
        d = 1.0 - r
        n = int(math.floor(-math.log2(d)))
        while n > 0 and r < 1.0 - 2.0 ** (-n):
            n -= 1
        while r >= 1.0 - 2.0 ** (-n - 1):
            n += 1
        n = min(n, MAX_LEVEL)

    theta = normalize_angle(math.atan2(z_c.imag, z_c.real)) if r > 0.0 else 0.0
    count = 2 ** n
    k = int(math.floor(theta * count / TWO_PI))
    while k > 0 and theta < TWO_PI * k / count:
        k -= 1
    while k + 1 < count and theta >= TWO_PI * (k + 1) / count:
        k += 1
    return DyadicIndex(n, min(k, count - 1))


def color_class(index) -> int:
    """Class 1..4 by (n mod 2, k mod 2): (0,0)→1, (0,1)→2, (1,0)→3, (1,1)→4"""
    if isinstance(index, DyadicSquare):
        index = index.index
    if isinstance(index, tuple):
        index = DyadicIndex(*index)
    return 1 + 2 * (index.n % 2) + (index.k % 2)


def square_center(index) -> complex:
    if isinstance(index, tuple):
        index = DyadicIndex(*index)
    return DyadicSquare(index).center


def _pair_minimum(q_pts: np.ndarray, l_pts: np.ndarray, chunk: int = 512) -> Tuple[float, int, int]:
    best, best_i, best_j = math.inf, 0, 0
    for start in range(0, q_pts.size, chunk):
        block = q_pts[start:start + chunk]
        rho = pseudo_distance_array(block[:, None], l_pts[None, :])
        flat = int(np.argmin(rho))
        i, j = divmod(flat, l_pts.size)
        if rho[i, j] < best:
            best, best_i, best_j = float(rho[i, j]), start + i, j
    return best, best_i, best_j


@dataclass(frozen=True)
class SeparationEstimate:
    """Certified lower bound on ρ(Q, L) plus the raw numbers behind it"""

    bound: float
    grid_minimum: float
    refined_minimum: float
    slack: float
    witness: Tuple[complex, complex]


def separation_details(Q: DyadicSquare, L: DyadicSquare, per_side: int = 128) -> SeparationEstimate:
    """
    Lower bound on inf ρ(z, w), z ∈ Q, w ∈ L, from boundary sampling.

    ρ(·, w) is Lipschitz with constant ≤ 1/(1-|z|²) in Euclidean distance, so
    a sample spacing h on each side costs at most (h/2)/(1 - r_outer²) per square.
    A local Nelder-Mead refinement from the grid minimizer is reported alongside.
    """
    if Q == L:
        raise ValueError("square_separation needs two distinct squares")
    if color_class(Q) != color_class(L):
        raise ValueError(f"squares {Q.index} and {L.index} belong to different color classes")

    q_pts = Q.boundary_samples(per_side)
    l_pts = L.boundary_samples(per_side)
    grid_min, i, j = _pair_minimum(q_pts, l_pts)

    def side_step(square: DyadicSquare) -> float:
        radial = (square.r_outer - square.r_inner) / (per_side - 1)
        angular = square.r_outer * (square.theta_end - square.theta_start) / (per_side - 1)
        return max(radial, angular)

    slack = 0.0
    for square in (Q, L):
        slack += 0.5 * side_step(square) / (1.0 - square.r_outer ** 2)

    def objective(x: np.ndarray) -> float:
        z = _clamp_polar(Q, x[0], x[1])
        w = _clamp_polar(L, x[2], x[3])
        return float(pseudo_distance_array(z, w))

    z0, w0 = q_pts[i], l_pts[j]
    x0 = np.array([abs(z0), np.angle(z0), abs(w0), np.angle(w0)])
    result = minimize(objective, x0, method="Nelder-Mead", options={"xatol": 1e-12, "fatol": 1e-15, "maxiter": 2000})
    refined = min(grid_min, float(result.fun))

    bound = max(0.0, grid_min - slack)
    logger.debug("separation %s/%s: grid %.6g, refined %.6g, slack %.3g", Q.index, L.index, grid_min, refined, slack)
    return SeparationEstimate(bound=bound, grid_minimum=grid_min, refined_minimum=refined, slack=slack, witness=(z0, w0))


def _clamp_polar(square: DyadicSquare, r: float, theta: float) -> complex:
    r = min(max(r, square.r_inner), square.r_outer * (1.0 - 1e-15))
    lo, hi = square.theta_start, square.theta_end
    shifted = lo + ((theta - lo) % TWO_PI)
    if shifted > hi:
        # nearer end of the arc, going either way round the circle
        shifted = hi if shifted - hi < lo + TWO_PI - shifted else lo
    return r * complex(math.cos(shifted), math.sin(shifted))


def square_separation(Q: DyadicSquare, L: DyadicSquare, per_side: int = 128) -> float:
    """Certified lower bound on ρ(Q, L) for two distinct squares of the same color class"""
    return separation_details(Q, L, per_side).bound


def squares_frame(indices: Iterable) -> pd.DataFrame:
    """Squares and their colors as a DataFrame, one row per square in the given order"""
    rows = []
    for index in indices:
        if isinstance(index, tuple):
            index = DyadicIndex(*index)
        rows.append(DyadicSquare(index).to_dict())
    columns = ["n", "k", "color", "r_inner", "r_outer", "theta_start", "theta_end"]
    return pd.DataFrame(rows, columns=columns)


def occupied_squares(points) -> Dict[DyadicIndex, List[int]]:
    """Map each occupied square to the indices of its points, in input order"""
    if hasattr(points, "complex_points"):
        values = points.complex_points
    else:
        values = [as_complex(p) for p in points]
    groups: Dict[DyadicIndex, List[int]] = {}
    for i, z in enumerate(values):
        groups.setdefault(square_of(complex(z)), []).append(i)
    return groups


def level_squares(n: int, ks: Optional[Iterable[int]] = None) -> List[DyadicSquare]:
    ks = range(2 ** n) if ks is None else ks
    return [DyadicSquare.of(n, k) for k in ks]

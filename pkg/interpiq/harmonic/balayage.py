"""
Poisson balayage B(μ)(ζ) = Σ m_i P_{z_i}(ζ) of discrete measures, its dual Orlicz
norms on refined boundary grids, and the extremal weights that realize them.
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
import pandas as pd
from scipy.optimize import minimize_scalar

from ..geometry.disk import TWO_PI
from ..orlicz.norms import luxemburg_norm, orlicz_norm
from ..orlicz.shapes import OrliczShape
from .poisson import pairing, poisson_kernel
from .weights import ArcWeight, DiscreteMeasure

logger = logging.getLogger(__name__)

DEFAULT_GRID_BASE = 4096
LOCAL_STEP_FACTOR = 8.0
GRADING = 0.05
REFINEMENT_RTOL = 1e-6
DUAL_KINDS = ("orlicz", "luxemburg", "sup")
GRID_CHUNK = 8192


@dataclass(frozen=True)
class BoundarySamples:
    """A boundary function sampled on a periodic grid with trapezoid masses (sum 1)"""

    theta: np.ndarray
    values: np.ndarray
    masses: np.ndarray

    def samples(self) -> Tuple[np.ndarray, np.ndarray]:
        return self.values, self.masses

    def __len__(self) -> int:
        return int(self.theta.size)

    def cell_starts(self) -> np.ndarray:
        """Left ends of the cells each node's mass stands for"""
        gaps = np.diff(np.append(self.theta, self.theta[0] + TWO_PI))
        return np.mod(self.theta - 0.5 * np.roll(gaps, 1), TWO_PI)

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame({"theta[rad]": self.theta, "value": self.values, "mass": self.masses})


def boundary_grid(
    centres: np.ndarray,
    defects: np.ndarray,
    base: int = DEFAULT_GRID_BASE,
    density: float = 1.0,
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Uniform grid of ``base`` nodes plus a graded local grid at every centre.

    Near a centre with defect d the spacing is d/(8·density) and grows like
    cosh until it reaches the uniform spacing.

    Returns:
        (theta in [0, 2π) increasing, trapezoid masses summing to 1)
    """
    h_base = TWO_PI / base
    pieces = [np.arange(base) * h_base, np.asarray(centres, dtype=float)]
    for centre, d in zip(centres, defects):
        h0 = float(d) / (LOCAL_STEP_FACTOR * density)
        if h0 >= h_base:
            continue
        k_max = int(math.ceil(math.acosh(h_base / h0) / GRADING))
        k = np.arange(-k_max, k_max + 1, dtype=float)
        pieces.append(centre + h0 * np.sinh(GRADING * k) / GRADING)

    theta = np.sort(np.mod(np.concatenate(pieces), TWO_PI))
    keep = np.concatenate([[True], np.diff(theta) > 1e-15])
    theta = theta[keep]
    if theta[-1] > TWO_PI - 1e-15:
        theta = theta[:-1]
    gaps = np.diff(np.append(theta, theta[0] + TWO_PI))
    masses = 0.5 * (gaps + np.roll(gaps, 1)) / TWO_PI
    return theta, masses


class Balayage:
    """B(μ) as a callable plus its canonical refined sample grid"""

    def __init__(
        self,
        mu: DiscreteMeasure,
        grid_base: int = DEFAULT_GRID_BASE,
        grid_density: float = 1.0,
        parallelism: int = 1,
    ):
        self.mu = mu
        self.grid_base = int(grid_base)
        self.grid_density = float(grid_density)
        self.parallelism = int(parallelism)
        self._grid: Optional[BoundarySamples] = None

    def __call__(self, theta):
        theta_arr = np.atleast_1d(np.asarray(theta, dtype=float))
        if len(self.mu) == 0:
            out = np.zeros(theta_arr.shape)
        else:
            kernel = poisson_kernel(self.mu.atoms[:, None], theta_arr[None, :])
            out = np.sum(kernel * self.mu.masses[:, None], axis=0)
        return float(out[0]) if np.ndim(theta) == 0 else out

    def grid(self) -> BoundarySamples:
        """Samples on the refined grid, evaluated chunk by chunk in grid order"""
        if self._grid is None:
            atoms = self.mu.atoms
            theta, masses = boundary_grid(np.angle(atoms), 1.0 - np.abs(atoms), self.grid_base, self.grid_density)
            chunks = [theta[i:i + GRID_CHUNK] for i in range(0, theta.size, GRID_CHUNK)]
            if self.parallelism > 1 and len(chunks) > 1:
                with ThreadPoolExecutor(max_workers=self.parallelism) as pool:
                    parts = list(pool.map(self, chunks))
            else:
                parts = [self(c) for c in chunks]
            self._grid = BoundarySamples(theta, np.concatenate(parts), masses)
            logger.debug("balayage grid: %d nodes for %d atoms", theta.size, len(self.mu))
        return self._grid

    def refined(self) -> "Balayage":
        """Same measure on a grid with half the spacing everywhere"""
        return Balayage(self.mu, 2 * self.grid_base, 2.0 * self.grid_density, self.parallelism)


def balayage(mu: DiscreteMeasure, **grid_options) -> Balayage:
    return Balayage(mu, **grid_options)


@dataclass
class DualNormResult:
    """Dual norm of B(μ) with its grid-refinement check"""

    value: float
    kind: str
    grid_size: int
    refined_value: Optional[float] = None
    relative_change: Optional[float] = None

    @property
    def converged(self) -> Optional[bool]:
        if self.relative_change is None:
            return None
        return self.relative_change <= REFINEMENT_RTOL

    def to_dict(self) -> dict:
        return {
            "value": self.value,
            "kind": self.kind,
            "grid_size": self.grid_size,
            "refined_value": self.refined_value,
            "relative_change": self.relative_change,
            "converged": self.converged,
        }


def _dual_norm_on(samples: BoundarySamples, shape: OrliczShape, kind: str) -> float:
    if kind == "orlicz":
        return orlicz_norm(shape.conjugate(), samples)
    if kind == "luxemburg":
        return luxemburg_norm(shape.conjugate(), samples)
    if kind == "sup":
        return float(np.max(samples.values)) if len(samples) else 0.0
    raise ValueError(f"unknown dual norm kind '{kind}', expected one of {DUAL_KINDS}")


def dual_norm_details(
    mu: DiscreteMeasure,
    shape: OrliczShape,
    kind: str = "orlicz",
    grid_base: int = DEFAULT_GRID_BASE,
    grid_density: float = 1.0,
    refine: bool = True,
    parallelism: int = 1,
) -> DualNormResult:
    """
    ‖B(μ)‖ in the dual of L^φ.

    kind="orlicz" (default) is the Amemiya norm of B(μ) for φ*, which is the
    exact dual of the Luxemburg norm on L^φ; kind="luxemburg" is the Luxemburg
    norm for φ*, at most a factor 2 smaller; kind="sup" is the L^∞ norm, the
    degenerate pairing for φ(t) = t.
    """
    if kind not in DUAL_KINDS:
        raise ValueError(f"unknown dual norm kind '{kind}', expected one of {DUAL_KINDS}")
    if len(mu) == 0:
        return DualNormResult(0.0, kind, 0, 0.0 if refine else None, 0.0 if refine else None)

    bal = Balayage(mu, grid_base, grid_density, parallelism)
    samples = bal.grid()
    value = _dual_norm_on(samples, shape, kind)
    result = DualNormResult(value=value, kind=kind, grid_size=len(samples))
    if refine:
        refined = _dual_norm_on(bal.refined().grid(), shape, kind)
        result.refined_value = refined
        result.relative_change = abs(refined - value) / max(abs(refined), 1e-300)
        if not result.converged:
            logger.warning("dual norm changed by %.2e under grid refinement", result.relative_change)
    return result


def balayage_dual_norm(
    mu: DiscreteMeasure,
    shape: OrliczShape,
    kind: str = "orlicz",
    grid_base: int = DEFAULT_GRID_BASE,
    grid_density: float = 1.0,
    parallelism: int = 1,
) -> float:
    """‖B(μ)‖_{(L^φ)*} on the refined grid (no refinement check)"""
    return dual_norm_details(mu, shape, kind, grid_base, grid_density, refine=False, parallelism=parallelism).value


@dataclass
class WeightAscentResult:
    """Unit-ball weight found by the ascent and what it achieves"""

    weight: ArcWeight
    pairing: float
    dual_norm: float
    gamma: float
    evaluations: int

    @property
    def ratio(self) -> float:
        return self.pairing / self.dual_norm if self.dual_norm > 0.0 else 1.0


def weight_ascent(
    mu: DiscreteMeasure,
    shape: OrliczShape,
    grid_base: int = 1024,
    grid_density: float = 1.0,
    max_evaluations: int = 24,
) -> WeightAscentResult:
    """
    Constructive maximizer of pairing(w, μ) over the unit ball of L^φ.

    Starts from the extremal weight φ*′(k*B(μ)) of the Amemiya problem, made
    piecewise constant on the grid cells, then tunes the scalar γ in
    φ*′(γ k* B(μ)) by bounded scalar search. Each candidate is renormalized to
    Luxemburg norm 1 and its pairing is evaluated exactly.
    """
    conj = shape.conjugate()
    samples = Balayage(mu, grid_base, grid_density).grid()
    dual, k_star = orlicz_norm(conj, samples, return_k=True)
    if dual == 0.0:
        return WeightAscentResult(ArcWeight.constant(0.0), 0.0, 0.0, 1.0, 0)
    starts = samples.cell_starts()
    cache = {}

    def candidate(log_gamma: float) -> Tuple[float, ArcWeight]:
        if log_gamma not in cache:
            raw = np.asarray(conj.derivative(math.exp(log_gamma) * k_star * samples.values), dtype=float)
            weight = ArcWeight.from_pieces(starts, raw)
            norm = luxemburg_norm(shape, weight)
            unit = weight.scaled(1.0 / norm) if norm > 0.0 else weight
            cache[log_gamma] = (pairing(unit, mu), unit)
        return cache[log_gamma]

    result = minimize_scalar(
        lambda g: -candidate(g)[0],
        bounds=(math.log(0.5), math.log(2.0)),
        method="bounded",
        options={"maxiter": max_evaluations, "xatol": 1e-3},
    )
    best = max([0.0, float(result.x)], key=lambda g: candidate(g)[0])
    value, weight = candidate(best)
    logger.debug("weight ascent: pairing %.10g vs dual norm %.10g", value, dual)
    return WeightAscentResult(weight, value, dual, math.exp(best), len(cache))

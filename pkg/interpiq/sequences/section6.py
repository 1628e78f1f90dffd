"""
The staged sequence λ_{n,k} = (1 - 2^{-n}) e^{2πik/2ⁿ}, |k| ≤ k_n, that separates
nearby Hardy-Orlicz classes, with truncation control.

Two stage-count families are supported:

    psi:     k_n = ⌊2ⁿ / (n ln^{1+ε} n)⌋,            stages n ≥ 2
    loglog:  k_n = ⌊2ⁿ / (n ln n (ln ln n)^{1+ε})⌋,  stages n ≥ 3

The effective count is capped at 2^{n-1} - 1 so that no stage wraps around the
circle and repeats a point.
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from typing import Iterable, List, Optional, Tuple

import numpy as np
from scipy.integrate import quad
from scipy.optimize import brentq

from ..geometry.arcs import poisson_at_one, symmetric_arc_measure
from ..geometry.disk import TWO_PI, as_complex, log_abs_factors
from ..utils.numerics import CompensatedAccumulator, pairwise_sum
from .base import GeneratedSequence, TailEstimate

logger = logging.getLogger(__name__)

FAMILIES = ("psi", "loglog")
MAX_POINTS = 5_000_000
STAGE_CHUNK = 1 << 16

# stages summed term by term before the analytic remainder takes over
TAIL_EXACT_STAGES = 48
FAR_FIELD_EXACT_STAGES = 48
# arcs of half-width below this fraction of |1 - λ| are treated as point masses at 1
LINEAR_REGIME = 1e-3


def _check_family(family: str) -> str:
    if family not in FAMILIES:
        raise ValueError(f"unknown stage family '{family}', expected one of {FAMILIES}")
    return family


def first_stage(family: str = "psi") -> int:
    return 2 if _check_family(family) == "psi" else 3


def stage_density(x: float, epsilon: float, family: str = "psi") -> float:
    """D(x) with k_x ≈ 2^x / D(x)"""
    if family == "psi":
        return x * math.log(x) ** (1.0 + epsilon)
    return x * math.log(x) * math.log(math.log(x)) ** (1.0 + epsilon)


def _log_density(u: float, epsilon: float, family: str) -> float:
    """ln D(e^u)"""
    if family == "psi":
        return u + (1.0 + epsilon) * math.log(u)
    return u + math.log(u) + (1.0 + epsilon) * math.log(math.log(u))


def density_tail_integral(a: float, epsilon: float, family: str = "psi") -> float:
    """∫_a^∞ dx / D(x) in closed form"""
    if family == "psi":
        return 1.0 / (epsilon * math.log(a) ** epsilon)
    return 1.0 / (epsilon * math.log(math.log(a)) ** epsilon)


def stage_count(n: int, epsilon: float, family: str = "psi") -> Tuple[int, int]:
    """
    Raw and effective k_n for one stage.

    Returns:
        (raw, effective) with effective = min(raw, 2^{n-1} - 1)
    """
    if epsilon <= 0.0:
        raise ValueError(f"epsilon must be > 0, got {epsilon}")
    if n < first_stage(family):
        raise ValueError(f"stage {n} below the first stage of family '{family}'")
    raw = int(math.floor(2.0 ** n / stage_density(n, epsilon, family)))
    return raw, min(raw, 2 ** (n - 1) - 1)


def stage_points(n: int, epsilon: float, family: str = "psi") -> Tuple[np.ndarray, np.ndarray]:
    """k values and points of stage n, k ascending"""
    _, k_n = stage_count(n, epsilon, family)
    ks = np.arange(-k_n, k_n + 1, dtype=np.int64)
    theta = TWO_PI * ks.astype(float) / 2.0 ** n
    return ks, (1.0 - 2.0 ** (-n)) * np.exp(1j * theta)


class Section6Generator:
    """Generator for the staged sequence truncated at stage N_max"""

    tag = "section6"

    def __init__(self, epsilon: float, N_max: int, family: str = "psi"):
        if not epsilon > 0.0:
            raise ValueError(f"epsilon must be > 0, got {epsilon}")
        self.family = _check_family(family)
        if N_max < first_stage(family):
            raise ValueError(f"N_max must be ≥ {first_stage(family)}, got {N_max}")
        self.epsilon = float(epsilon)
        self.N_max = int(N_max)

    @property
    def params(self) -> dict:
        return {"epsilon": self.epsilon, "N_max": self.N_max, "family": self.family}

    def stages(self) -> range:
        return range(first_stage(self.family), self.N_max + 1)

    def count(self) -> int:
        """Number of points in the truncation, computed from the stage counts"""
        return sum(2 * stage_count(n, self.epsilon, self.family)[1] + 1 for n in self.stages())

    def generate(self) -> GeneratedSequence:
        """
        Materialize the truncation in canonical order (stage-major, k ascending).

        Raises:
            ValueError: if the truncation would exceed MAX_POINTS points
        """
        total = self.count()
        if total > MAX_POINTS:
            raise ValueError(f"truncation N_max={self.N_max} has {total} points (limit {MAX_POINTS})")

        points, defects, stages = [], [], []
        for n in self.stages():
            _, pts = stage_points(n, self.epsilon, self.family)
            points.append(pts)
            defects.append(np.full(pts.size, 2.0 ** (-n)))
            stages.append(np.full(pts.size, n, dtype=np.int64))
            logger.debug("stage %d: %d points", n, pts.size)

        return GeneratedSequence(
            np.concatenate(points),
            generator=self.tag,
            params=self.params,
            defects=np.concatenate(defects),
            stages=np.concatenate(stages),
        )


def gen_section6(epsilon: float, N_max: int, family: str = "psi") -> GeneratedSequence:
    return Section6Generator(epsilon, N_max, family).generate()


def index_of(seq: GeneratedSequence, n: int, k: int) -> int:
    """Position of λ_{n,k} in a section6 truncation"""
    eps = seq.params["epsilon"]
    family = seq.params.get("family", "psi")
    _, k_n = stage_count(n, eps, family)
    if abs(k) > k_n or n > seq.params["N_max"]:
        raise IndexError(f"λ_({n},{k}) is not part of the truncation")
    offset = sum(2 * stage_count(j, eps, family)[1] + 1 for j in range(first_stage(family), n))
    return offset + k + k_n


def _stage_sum(
    j: int,
    epsilon: float,
    family: str,
    z: complex,
    z_defect: Optional[float],
    skip_k: Optional[int],
) -> float:
    """Σ_k log 1/|b_{λ_{j,k}}(z)| over one stage, chunked"""
    _, k_j = stage_count(j, epsilon, family)
    acc = CompensatedAccumulator()
    scale = 1.0 - 2.0 ** (-j)
    for start in range(-k_j, k_j + 1, STAGE_CHUNK):
        ks = np.arange(start, min(start + STAGE_CHUNK, k_j + 1), dtype=np.int64)
        if skip_k is not None and ks[0] <= skip_k <= ks[-1]:
            ks = ks[ks != skip_k]
        if ks.size == 0:
            continue
        mu = scale * np.exp(1j * TWO_PI * ks.astype(float) / 2.0 ** j)
        logs = log_abs_factors(mu, z, mu_defect=np.full(ks.size, 2.0 ** (-j)), z_defect=z_defect)
        acc.add(-pairwise_sum(logs))
    return acc.value


def stage_contributions(
    epsilon: float,
    lam,
    stages: Iterable[int],
    family: str = "psi",
    own: Optional[Tuple[int, int]] = None,
    parallelism: int = 1,
) -> np.ndarray:
    """
    Contribution of each listed stage to log 1/|B(λ)|.

    Args:
        epsilon: stage-count parameter
        lam: evaluation point
        stages: stage indices, reported in this order
        family: stage-count family
        own: (n, k) of λ when it is itself λ_{n,k}; that point is left out and
            the exact defect 2^{-n} is used
        parallelism: worker threads over stages

    Returns:
        Array of per-stage sums
    """
    z = as_complex(lam)
    stages = list(stages)
    z_defect = None if own is None else 2.0 ** (-own[0])

    def one(j: int) -> float:
        skip_k = own[1] if own is not None and own[0] == j else None
        value = _stage_sum(j, epsilon, family, z, z_defect, skip_k)
        logger.debug("stage %d contributes %.12g", j, value)
        return value

    if parallelism > 1 and len(stages) > 1:
        with ThreadPoolExecutor(max_workers=parallelism) as pool:
            values = list(pool.map(one, stages))
    else:
        values = [one(j) for j in stages]
    return np.array(values, dtype=float)


def stagewise_phi(
    epsilon: float,
    n: int,
    k: int,
    J_max: int,
    family: str = "psi",
    parallelism: int = 1,
) -> float:
    """φ_Λ(λ_{n,k}) for the truncation at stage J_max, without materializing it"""
    if J_max < n:
        raise ValueError(f"J_max={J_max} is below the stage n={n} of the point")
    _, k_n = stage_count(n, epsilon, family)
    if abs(k) > k_n:
        raise IndexError(f"|k|={abs(k)} exceeds k_{n}={k_n}")
    lam = (1.0 - 2.0 ** (-n)) * complex(math.cos(TWO_PI * k / 2.0 ** n), math.sin(TWO_PI * k / 2.0 ** n))
    stages = range(first_stage(family), J_max + 1)
    values = stage_contributions(epsilon, lam, stages, family, own=(n, k), parallelism=parallelism)
    acc = CompensatedAccumulator()
    acc.extend(values)
    return acc.value


def _radius_and_defect(lam, defect: Optional[float]) -> Tuple[complex, float, float]:
    z = as_complex(lam)
    r = abs(z)
    d = float(defect) if defect is not None else 1.0 - r
    if not d > 0.0:
        raise ValueError(f"evaluation point must lie in the open disk, got |λ| = {r!r}")
    return z, r, d


def _tail_bound_terms(epsilon: float, family: str, r: float, d: float, J_max: int) -> Tuple[float, float]:
    """(bound, comparison constant) for the stages j > J_max"""
    cut = 2.0 ** (-(J_max + 1))
    if d <= cut:
        raise ValueError(f"J_max={J_max} does not exceed the stage of the evaluation point")

    # ρ(λ, μ) ≥ ρ(|λ|, 1 - 2^{-(J+1)}) for every omitted μ
    rho0 = (d - cut) / (d + cut - d * cut)
    constant = 1.0 / (2.0 * rho0 * rho0)

    acc = CompensatedAccumulator()
    last = J_max + TAIL_EXACT_STAGES
    for j in range(J_max + 1, last + 1):
        _, k_j = stage_count(j, epsilon, family)
        denom = d + r * 2.0 ** (-j)
        acc.add((2 * k_j + 1) * 2.0 ** (1 - j) / (denom * denom))
    remainder = (4.0 * density_tail_integral(last, epsilon, family) + 2.0 ** (1 - last)) / (d * d)
    acc.add(remainder)

    one_minus_sq = d * (2.0 - d)
    return constant * one_minus_sq * acc.value, constant


def tail_bound(seq: GeneratedSequence, lam, J_max: int, defect: Optional[float] = None) -> TailEstimate:
    """
    Rigorous upper bound on the contribution of stages beyond J_max to φ_Λ(λ).

    Uses log(1/|b|) ≤ (1 - |b|²)/(2|b|²), the lower bound |b_μ(λ)| ≥ ρ₀ for every
    omitted μ, and |1 - conj(μ)λ| ≥ 1 - |μ||λ|. The first TAIL_EXACT_STAGES omitted
    stages are summed term by term; the rest is closed by an integral test. Only
    |λ| enters, so the bound holds at any λ with |λ| < 1 - 2^{-(J_max+1)}.

    Sequences that are not staged have no omitted stages and get bound 0.
    """
    if seq.generator != Section6Generator.tag:
        return TailEstimate(J_max=J_max, bound=0.0)
    epsilon = float(seq.params["epsilon"])
    family = seq.params.get("family", "psi")
    _, r, d = _radius_and_defect(lam, defect)
    bound, constant = _tail_bound_terms(epsilon, family, r, d, J_max)
    return TailEstimate(J_max=J_max, bound=bound, constant=constant)


def far_field_estimate(
    epsilon: float,
    lam,
    J_max: int,
    family: str = "psi",
    defect: Optional[float] = None,
) -> TailEstimate:
    """
    Analytic estimate of the stages beyond J_max of the infinite sequence at λ.

    Each stage j contributes about
        (1 - 2^{-j-1}) (1-|λ|²)/(1-ρ_j²|λ|²) ω(ρ_j λ, [-θ_j, θ_j]),   ρ_j = 1 - 2^{-j},
    with θ_j = 2π(k_j + 1/2)/2^j. Far stages replace θ_j by 2π/D(j) and the sum by
    an integral-test sandwich; beyond the point where the arcs are tiny compared
    with |1 - λ| the remaining integral is 2 P_λ(1) ∫dx/D(x) in closed form.

    Returns:
        TailEstimate with the rigorous bound, the estimate and its uncertainty
    """
    _check_family(family)
    z, r, d = _radius_and_defect(lam, defect)
    bound, constant = _tail_bound_terms(epsilon, family, r, d, J_max)
    one_minus_sq = d * (2.0 - d)

    estimate = CompensatedAccumulator()
    uncertainty = CompensatedAccumulator()

    J_mid = J_max + FAR_FIELD_EXACT_STAGES
    for j in range(J_max + 1, J_mid + 1):
        _, k_j = stage_count(j, epsilon, family)
        step = 2.0 ** (-j)
        rho_j = 1.0 - step
        delta = d + step - d * step
        theta = TWO_PI * (k_j + 0.5) * step
        amplitude = (1.0 - 0.5 * step) * one_minus_sq / (delta * (2.0 - delta))
        value = amplitude * float(symmetric_arc_measure(rho_j * z, theta))
        h = TWO_PI * step
        estimate.add(value)
        uncertainty.add(value * (4.0 * step / d + 2.0 * (h / delta) ** 2))

    distance_to_one = abs(1.0 - z)

    def g(x: float) -> float:
        return float(symmetric_arc_measure(z, TWO_PI / stage_density(x, epsilon, family)))

    target = math.log(TWO_PI / (LINEAR_REGIME * distance_to_one))
    u_lo = math.log(J_mid)
    if _log_density(u_lo, epsilon, family) >= target:
        u_lin = u_lo
    else:
        u_hi = 2.0 * u_lo
        while _log_density(u_hi, epsilon, family) < target:
            u_hi *= 2.0
        u_lin = brentq(lambda u: _log_density(u, epsilon, family) - target, u_lo, u_hi, xtol=1e-12)
    x_lin = math.exp(u_lin)

    near_integral, near_error = 0.0, 0.0
    if u_lin > u_lo:
        near_integral, near_error = quad(
            lambda u: g(math.exp(u)) * math.exp(u), u_lo, u_lin, limit=500, epsabs=0.0, epsrel=1e-10
        )
    first_cell, _ = quad(g, J_mid, J_mid + 1, epsabs=0.0, epsrel=1e-10)

    p_one = float(poisson_at_one(z))
    linear_tail = 2.0 * p_one * density_tail_integral(x_lin, epsilon, family)
    theta_lin = TWO_PI / stage_density(x_lin, epsilon, family)

    # the sum over j > J_mid lies between the integrals from J_mid + 1 and from J_mid
    upper = near_integral + linear_tail
    estimate.add(upper - 0.5 * first_cell)
    uncertainty.add(0.5 * first_cell)
    uncertainty.add(near_error)
    uncertainty.add(linear_tail * 4.0 * (theta_lin / distance_to_one) ** 2)
    # floor in k_j, the radius 1 - 2^{-j} and the amplitude factor beyond J_mid
    uncertainty.add(6.0 * 2.0 ** (-J_mid) / d)

    logger.debug(
        "far field at |λ|=%.12g beyond %d: estimate %.10g ± %.3g (linear regime from x=%.4g)",
        r, J_max, estimate.value, uncertainty.value, x_lin,
    )
    return TailEstimate(
        J_max=J_max,
        bound=bound,
        constant=constant,
        estimate=estimate.value,
        uncertainty=uncertainty.value,
    )


def stage_blaschke_sum(epsilon: float, N_max: int, family: str = "psi") -> float:
    """Σ_n (2k_n + 1)(1 - (1 - 2^{-n})²) from the stage counts alone"""
    acc = CompensatedAccumulator()
    for n in range(first_stage(family), N_max + 1):
        _, k_n = stage_count(n, epsilon, family)
        step = 2.0 ** (-n)
        acc.add((2 * k_n + 1) * step * (2.0 - step))
    return acc.value


def stages_of(seq: GeneratedSequence) -> List[int]:
    if seq.stages is None:
        return []
    return sorted({int(s) for s in seq.stages if s >= 0})

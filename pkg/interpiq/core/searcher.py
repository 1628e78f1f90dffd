"""
Lower-bound search for the constant in the dual condition

    Σ c_λ φ_Λ(λ) ≤ C ‖Σ c_λ P_λ‖_{(L^φ)*}      for all c_λ ≥ 0.

Every coefficient vector the search visits gives a valid lower bound for C.
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional

import numpy as np
import pandas as pd
from rich.console import Console
from rich.table import Table
from scipy.optimize import minimize_scalar

from ..geometry.disk import phi_all
from ..harmonic.balayage import boundary_grid
from ..harmonic.poisson import poisson_kernel
from ..orlicz.norms import orlicz_norm
from ..orlicz.shapes import OrliczShape
from ..sequences.base import GeneratedSequence

logger = logging.getLogger(__name__)
console = Console()

SEARCH_NORMS = ("orlicz", "sup")
DEFAULT_BUDGET = 120
DEFAULT_MAX_SUPPORT = 48
SCALAR_EVALUATIONS = 12
IMPROVEMENT = 1e-12


@dataclass
class DualSearchState:
    """Best coefficient vector found so far"""

    support: List[int]
    coefficients: np.ndarray
    objective: float
    constraint: float
    norm: str = "orlicz"
    evaluations: int = 0
    trace: List[Dict[str, float]] = field(default_factory=list)

    @property
    def ratio(self) -> float:
        return self.objective / self.constraint if self.constraint > 0.0 else 0.0

    def trace_frame(self) -> pd.DataFrame:
        columns = ["iteration", "coordinate", "support_size", "objective", "constraint", "ratio"]
        return pd.DataFrame(self.trace, columns=columns)

    def to_dict(self) -> dict:
        return {
            "support": [int(i) for i in self.support],
            "coefficients": [float(c) for c in self.coefficients],
            "objective": self.objective,
            "constraint": self.constraint,
            "ratio": self.ratio,
            "norm": self.norm,
            "evaluations": self.evaluations,
        }


class DualSearcher:
    """Coordinate ascent of the dual-condition ratio over a fixed candidate set"""

    def __init__(
        self,
        seq: GeneratedSequence,
        shape: OrliczShape,
        norm: str = "orlicz",
        phi: Optional[np.ndarray] = None,
        max_support: int = DEFAULT_MAX_SUPPORT,
        grid_base: int = 1024,
        grid_density: float = 1.0,
    ):
        if norm not in SEARCH_NORMS:
            raise ValueError(f"unknown search norm '{norm}', expected one of {SEARCH_NORMS}")
        self.seq = seq
        self.shape = shape
        self.norm = norm
        self.phi = phi_all(seq) if phi is None else np.asarray(phi, dtype=float)
        if self.phi.size != len(seq):
            raise ValueError(f"{self.phi.size} φ values for {len(seq)} points")
        if not np.all(np.isfinite(self.phi)):
            raise ValueError("sequence has a repeated point (infinite φ_Λ)")

        # largest φ first, ties to the lower index
        order = sorted(range(len(seq)), key=lambda i: (-self.phi[i], i))
        self.candidates = order[:max_support]
        points = seq.complex_points[self.candidates]
        theta, self.masses = boundary_grid(np.angle(points), 1.0 - np.abs(points), grid_base, grid_density)
        self.kernel = poisson_kernel(points[:, None], theta[None, :]) if points.size else np.zeros((0, theta.size))
        self.weights = self.phi[self.candidates]
        self.evaluations = 0
        logger.debug("dual search: %d candidates on %d grid nodes", len(self.candidates), theta.size)

    def constraint(self, coefficients: np.ndarray) -> float:
        """‖Σ c_λ P_λ‖ on the grid (Amemiya norm for φ*, or sup)"""
        self.evaluations += 1
        values = np.asarray(coefficients, dtype=float) @ self.kernel
        if not np.any(values > 0.0):
            return 0.0
        if self.norm == "sup":
            return float(np.max(values))
        return orlicz_norm(self.shape.conjugate(), values, self.masses)

    def objective(self, coefficients: np.ndarray) -> float:
        return float(np.dot(coefficients, self.weights))

    def ratio(self, coefficients: np.ndarray) -> float:
        c = np.asarray(coefficients, dtype=float)
        norm = self.constraint(c)
        return self.objective(c) / norm if norm > 0.0 else 0.0

    def _state(self, coefficients: np.ndarray, constraint: Optional[float] = None) -> DualSearchState:
        c = np.asarray(coefficients, dtype=float)
        keep = np.flatnonzero(c > 0.0)
        constraint = self.constraint(c) if constraint is None else constraint
        return DualSearchState(
            support=[self.candidates[i] for i in keep],
            coefficients=c[keep],
            objective=self.objective(c),
            constraint=constraint,
            norm=self.norm,
        )

    def single_atom_ratios(self) -> np.ndarray:
        out = np.zeros(len(self.candidates))
        for i in range(len(self.candidates)):
            unit = np.zeros(len(self.candidates))
            unit[i] = 1.0
            out[i] = self.ratio(unit)
        return out

    def search(self, budget: int = DEFAULT_BUDGET) -> DualSearchState:
        """
        Start from the best single atom, then adjust one coefficient at a time.

        Each coordinate move is a bounded scalar search of the ratio over
        c_i ∈ [0, 2 max c]; a move is kept only if it raises the ratio. Stops when
        ``budget`` norm evaluations are spent or a full sweep brings no gain.
        """
        if not self.candidates:
            return DualSearchState([], np.zeros(0), 0.0, 0.0, self.norm)
        singles = self.single_atom_ratios()
        best_i = int(np.argmax(singles))
        c = np.zeros(len(self.candidates))
        c[best_i] = 1.0
        best_ratio = float(singles[best_i])
        trace = [self._trace_row(0, best_i, c, best_ratio)]
        spent = 0
        iteration = 0

        while spent < budget:
            improved = False
            for i in range(len(self.candidates)):
                if spent >= budget:
                    break
                if np.count_nonzero(c) == 1 and c[i] > 0.0:
                    continue
                scale = 2.0 * float(np.max(c))
                before = self.evaluations
                trial = c.copy()

                def negative_ratio(t: float) -> float:
                    trial[i] = max(t, 0.0)
                    return -self.ratio(trial)

                result = minimize_scalar(
                    negative_ratio,
                    bounds=(0.0, scale),
                    method="bounded",
                    options={"maxiter": min(SCALAR_EVALUATIONS, max(budget - spent, 1)), "xatol": 1e-6 * scale},
                )
                spent += self.evaluations - before
                candidate_ratio = -float(result.fun)
                iteration += 1
                if candidate_ratio > best_ratio * (1.0 + IMPROVEMENT):
                    c[i] = max(float(result.x), 0.0)
                    best_ratio = candidate_ratio
                    improved = True
                    trace.append(self._trace_row(iteration, i, c, best_ratio))
            if not improved:
                break

        state = self._state(c)
        state.evaluations = self.evaluations
        state.trace = trace
        logger.info("dual search: ratio %.10g with %d atoms after %d evaluations", state.ratio, len(state.support), state.evaluations)
        return state

    def _trace_row(self, iteration: int, coordinate: int, c: np.ndarray, ratio: float) -> Dict[str, float]:
        objective = self.objective(c)
        return {
            "iteration": iteration,
            "coordinate": int(self.candidates[coordinate]),
            "support_size": int(np.count_nonzero(c)),
            "objective": objective,
            "constraint": objective / ratio if ratio > 0.0 else 0.0,
            "ratio": ratio,
        }

    def display_state(self, state: DualSearchState, limit: int = 10):
        table = Table(title=f"Dual search ({state.norm}): ratio {state.ratio:.8g}")
        table.add_column("index", justify="right")
        table.add_column("c_λ", justify="right")
        table.add_column("φ_Λ(λ)", justify="right")
        order = np.argsort(-state.coefficients, kind="stable")[:limit]
        for j in order:
            idx = state.support[j]
            table.add_row(str(idx), f"{state.coefficients[j]:.6g}", f"{self.phi[idx]:.6g}")
        console.print(table)


def condition_d_search(
    seq: GeneratedSequence,
    shape: OrliczShape,
    budget: int = DEFAULT_BUDGET,
    norm: str = "orlicz",
    phi: Optional[np.ndarray] = None,
    max_support: int = DEFAULT_MAX_SUPPORT,
    grid_base: int = 1024,
) -> DualSearchState:
    """
    Best lower bound found for the dual-condition constant C.

    norm="sup" pairs with L^∞, the degenerate φ(t) = t case.
    """
    searcher = DualSearcher(seq, shape, norm=norm, phi=phi, max_support=max_support, grid_base=grid_base)
    return searcher.search(budget)

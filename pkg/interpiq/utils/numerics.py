"""
Numerical building blocks: deterministic compensated summation and guarded bisection.

Every reduction in InterpIQ goes through ``pairwise_sum`` or ``CompensatedAccumulator``
so that serial and threaded runs produce identical floats.
"""

import logging
import math
from typing import Callable, Iterable, Tuple

import numpy as np

logger = logging.getLogger(__name__)

DEFAULT_RTOL = 1e-10
DEFAULT_MAX_ITER = 200
OVERFLOW_GUARD = 1e300
PAIRWISE_BLOCK = 1024


class ConvergenceError(RuntimeError):
    """Raised when an iterative solver hits its iteration cap or overflow guard"""

    def __init__(self, what: str, iterations: int, detail: str = ""):
        self.what = what
        self.iterations = iterations
        message = f"{what} did not converge after {iterations} iterations"
        if detail:
            message += f" ({detail})"
        super().__init__(message)


class CompensatedAccumulator:
    """Neumaier running sum; order of ``add`` calls is the reduction order."""

    def __init__(self):
        self.total = 0.0
        self.compensation = 0.0
        self.count = 0

    def add(self, value: float) -> None:
        value = float(value)
        t = self.total + value
        if abs(self.total) >= abs(value):
            self.compensation += (self.total - t) + value
        else:
            self.compensation += (value - t) + self.total
        self.total = t
        self.count += 1

    def extend(self, values: Iterable[float]) -> None:
        for value in values:
            self.add(value)

    @property
    def value(self) -> float:
        return self.total + self.compensation


def neumaier_sum(values: Iterable[float]) -> float:
    """Neumaier's improved Kahan summation in input order."""
    acc = CompensatedAccumulator()
    acc.extend(values)
    return acc.value


def pairwise_sum(values, block: int = PAIRWISE_BLOCK) -> float:
    """
    Tree summation with compensated accumulation of the block partials.

    The input is cut into fixed blocks in input order; each block is reduced by
    numpy's pairwise kernel and the partials are combined with Neumaier's sum.

    Args:
        values: array-like of floats
        block: block length of the first tree level

    Returns:
        The sum as a Python float (``-inf``/``inf``/``nan`` propagate unchanged)
    """
    arr = np.ascontiguousarray(values, dtype=float).ravel()
    if arr.size == 0:
        return 0.0
    if not np.all(np.isfinite(arr)):
        return float(np.sum(arr))

    n_blocks = -(-arr.size // block)
    padded = np.zeros(n_blocks * block, dtype=float)
    padded[: arr.size] = arr
    partials = padded.reshape(n_blocks, block).sum(axis=1)
    return neumaier_sum(partials)


def _midpoint(lo: float, hi: float) -> float:
    if lo > 0.0 and hi > 4.0 * lo:
        return math.sqrt(lo) * math.sqrt(hi)
    return 0.5 * (lo + hi)


def expand_bracket(
    predicate: Callable[[float], bool],
    start: float = 1.0,
    guard: float = OVERFLOW_GUARD,
    what: str = "bracket search",
) -> Tuple[float, float]:
    """
    Find ``lo < hi`` with ``predicate(lo)`` False and ``predicate(hi)`` True.

    ``predicate`` must be monotone (False below a threshold, True above).
    Returns ``(0.0, hi)`` when the predicate already holds near zero.
    """
    hi = start
    steps = 0
    while not predicate(hi):
        hi *= 2.0
        steps += 1
        if hi > guard:
            raise ConvergenceError(what, steps, f"predicate still false at {hi:.3e}")

    lo = 0.5 * hi
    while predicate(lo):
        hi = lo
        lo *= 0.5
        steps += 1
        if lo < 1.0 / guard:
            return 0.0, hi
    return lo, hi


def bisect_threshold(
    predicate: Callable[[float], bool],
    lo: float,
    hi: float,
    rtol: float = DEFAULT_RTOL,
    max_iter: int = DEFAULT_MAX_ITER,
    what: str = "bisection",
) -> float:
    """
    Smallest t in (lo, hi] with ``predicate(t)`` True, to relative tolerance ``rtol``.

    The returned value always satisfies the predicate.
    """
    for _ in range(max_iter):
        if hi - lo <= rtol * abs(hi):
            return hi
        mid = _midpoint(lo, hi)
        if predicate(mid):
            hi = mid
        else:
            lo = mid
    raise ConvergenceError(what, max_iter, f"bracket [{lo:.6e}, {hi:.6e}]")


def grow_bracket(
    func: Callable[[np.ndarray], np.ndarray],
    targets,
    start,
    guard: float = OVERFLOW_GUARD,
    what: str = "vectorized bracket search",
) -> np.ndarray:
    """Elementwise upper brackets x ≥ start with ``func(x) >= target`` by doubling"""
    targets = np.asarray(targets, dtype=float)
    hi = np.broadcast_to(np.maximum(np.asarray(start, dtype=float), 1e-300), targets.shape).copy()
    steps = 0
    while True:
        short = func(hi) < targets
        if not np.any(short):
            return hi
        hi = np.where(short, 2.0 * hi, hi)
        steps += 1
        if np.any(hi > guard):
            raise ConvergenceError(what, steps, f"target {np.max(targets):.3e} out of reach")


def solve_increasing(
    func: Callable[[np.ndarray], np.ndarray],
    targets,
    lo,
    hi,
    rtol: float = 1e-13,
    max_iter: int = DEFAULT_MAX_ITER,
    what: str = "vectorized bisection",
) -> np.ndarray:
    """
    Vectorized bisection for ``func(x) = target`` with ``func`` nondecreasing.

    Returns the smallest x (to tolerance) with ``func(x) >= target``.
    """
    targets = np.asarray(targets, dtype=float)
    lo = np.broadcast_to(np.asarray(lo, dtype=float), targets.shape).copy()
    hi = np.broadcast_to(np.asarray(hi, dtype=float), targets.shape).copy()

    for _ in range(max_iter):
        width = hi - lo
        if np.all(width <= rtol * np.maximum(np.abs(hi), 1e-300)):
            return hi
        geometric = (lo > 0.0) & (hi > 4.0 * lo)
        mid = np.where(geometric, np.sqrt(lo) * np.sqrt(hi), 0.5 * (lo + hi))
        above = func(mid) >= targets
        hi = np.where(above, mid, hi)
        lo = np.where(above, lo, mid)
    raise ConvergenceError(what, max_iter)

"""
Convex shape functions φ: [0, ∞) → [0, ∞) with φ(0) = 0, and their numeric conjugates.

Families with a singular or non-convex start are spliced below t0 by the line
through the origin that matches the value at t0; the slope jumps upward at t0,
so the spliced function stays convex.
"""

import logging
import math
from typing import Any, Dict, Optional, Sequence

import numpy as np

from ..utils.helpers import parse_floats, parse_spec
from ..utils.numerics import grow_bracket, solve_increasing
from ..utils.validators import ConfigError

logger = logging.getLogger(__name__)

NODES_PER_EFOLD = 16
NODE_FLOOR = 1e-12
NODE_CEILING = 1e12


def _like(t, out):
    """Return a float for scalar input, an array otherwise"""
    if np.ndim(t) == 0:
        return float(out)
    return out


def _as_nonnegative(t, what: str = "argument") -> np.ndarray:
    arr = np.asarray(t, dtype=float)
    if np.any(arr < 0.0) or np.any(np.isnan(arr)):
        raise ValueError(f"shape {what} must be ≥ 0")
    return arr


class OrliczShape:
    """
    Base class: subclasses provide ``_base`` and ``_base_derivative`` on [t0, ∞).

    Value, right-derivative and inverse are vectorized over numpy arrays and
    return floats for scalar input.
    """

    family = "abstract"
    eager_conjugate = True

    def __init__(self, t0: float = 0.0, t_max: float = math.inf):
        if t0 < 0.0 or not math.isfinite(t0):
            raise ValueError(f"splice point must be finite and ≥ 0, got {t0}")
        self.t0 = float(t0)
        self.t_max = float(t_max)
        self._conjugate: Optional["ConjugateShape"] = None
        if self.t0 > 0.0:
            self.phi0 = float(self._base(np.asarray(self.t0)))
            if not self.phi0 > 0.0:
                raise ValueError(f"splice value φ(t0) must be > 0, got {self.phi0}")
            self.c0 = self.phi0 / self.t0
        else:
            self.phi0 = 0.0
            self.c0 = None
        if self.eager_conjugate:
            self._conjugate = ConjugateShape(self)

    # -- family hooks -------------------------------------------------

    def _base(self, t: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def _base_derivative(self, t: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    @property
    def params(self) -> Dict[str, Any]:
        return {}

    @property
    def derivative_bound(self) -> float:
        """sup φ′ (inf for superlinear shapes)"""
        return math.inf

    # -- evaluation -----------------------------------------------------

    def value(self, t):
        arr = _as_nonnegative(t)
        with np.errstate(over="ignore"):
            if self.t0 > 0.0:
                out = np.where(arr < self.t0, self.c0 * arr, self._base(np.maximum(arr, self.t0)))
            else:
                out = self._base(arr)
        return _like(t, out)

    __call__ = value

    def derivative(self, t):
        """Right derivative φ′(t)"""
        arr = _as_nonnegative(t)
        with np.errstate(over="ignore"):
            if self.t0 > 0.0:
                out = np.where(arr < self.t0, self.c0, self._base_derivative(np.maximum(arr, self.t0)))
            else:
                out = self._base_derivative(arr)
        return _like(t, out)

    def young_gap(self, x):
        """x φ′(x) - φ(x), which equals φ*(φ′(x))"""
        arr = _as_nonnegative(x)
        return _like(x, np.maximum(arr * self.derivative(arr) - self.value(arr), 0.0))

    def inverse(self, u):
        """Smallest t with φ(t) ≥ u"""
        arr = np.atleast_1d(_as_nonnegative(u, "inverse argument"))
        out = np.zeros(arr.shape, dtype=float)
        if self.t0 > 0.0:
            low = arr <= self.phi0
            out[low] = arr[low] / self.c0
            high = ~low
        else:
            high = arr > 0.0
        if np.any(high):
            out[high] = self._solve_inverse(arr[high])
        return _like(u, out.reshape(np.shape(u)))

    def _solve_inverse(self, targets: np.ndarray) -> np.ndarray:
        lo = np.full(targets.shape, self.t0)
        if self.t0 > 0.0:
            # φ(t)/t is nondecreasing, so φ(u/c0) ≥ u
            hi = np.maximum(targets / self.c0, self.t0)
        else:
            hi = grow_bracket(self.value, targets, 1.0, what=f"{self.family} inverse")
        return solve_increasing(self.value, targets, lo, hi, what=f"{self.family} inverse")

    def composed(self, x):
        """Φ(x) = φ(log⁺ x)"""
        arr = np.asarray(x, dtype=float)
        with np.errstate(divide="ignore"):
            logs = np.where(arr > 1.0, np.log(np.maximum(arr, 1.0)), 0.0)
        return self.value(logs) if np.ndim(x) else float(self.value(float(logs)))

    def nodes(self) -> np.ndarray:
        """Node table on which the conjugate brackets its maximizers"""
        lo = self.t0 if self.t0 > 0.0 else NODE_FLOOR
        hi = min(self.t_max, NODE_CEILING)
        count = max(2, int(math.ceil(math.log(hi / lo) * NODES_PER_EFOLD)) + 1)
        return np.concatenate([[0.0], np.geomspace(lo, hi, count)])

    def conjugate(self) -> "ConjugateShape":
        """φ*, built with the shape; a conjugate builds its own conjugate on first use"""
        if self._conjugate is None:
            self._conjugate = ConjugateShape(self)
        return self._conjugate

    def is_superlinear(self) -> bool:
        return self.derivative_bound == math.inf

    def to_dict(self) -> Dict[str, Any]:
        return {"family": self.family, "params": self.params, "t0": self.t0}

    def describe(self) -> str:
        args = ",".join(f"{v:g}" for v in self.params.values() if isinstance(v, (int, float)))
        return f"{self.family}:{args}" if args else self.family

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.params}, t0={self.t0:g})"


class PowerShape(OrliczShape):
    """φ(t) = t^p / p, optionally spliced below t0"""

    family = "power"

    def __init__(self, p: float, t0: float = 0.0):
        if not p >= 1.0:
            raise ValueError(f"power exponent must be ≥ 1, got {p}")
        self.p = float(p)
        super().__init__(t0=t0, t_max=math.inf)

    @property
    def params(self) -> Dict[str, Any]:
        return {"p": self.p}

    @property
    def derivative_bound(self) -> float:
        return math.inf if self.p > 1.0 else 1.0

    def _base(self, t):
        return t ** self.p / self.p

    def _base_derivative(self, t):
        return t ** (self.p - 1.0)

    def _solve_inverse(self, targets):
        return (self.p * targets) ** (1.0 / self.p)


class PsiShape(OrliczShape):
    """ψ_ε(t) = t ln^ε t, spliced below t0 = e^{1+ε}"""

    family = "psi"

    def __init__(self, epsilon: float, t0: Optional[float] = None):
        if not epsilon > 0.0:
            raise ValueError(f"epsilon must be > 0, got {epsilon}")
        self.epsilon = float(epsilon)
        super().__init__(t0=math.exp(1.0 + epsilon) if t0 is None else t0, t_max=math.inf)

    @property
    def params(self) -> Dict[str, Any]:
        return {"epsilon": self.epsilon}

    def _base(self, t):
        return t * np.log(t) ** self.epsilon

    def _base_derivative(self, t):
        log_t = np.log(t)
        return log_t ** self.epsilon + self.epsilon * log_t ** (self.epsilon - 1.0)


class LogLogShape(OrliczShape):
    """t (ln ln t)^ε, spliced below t0 = exp(e^{1+ε})"""

    family = "loglog"

    def __init__(self, epsilon: float, t0: Optional[float] = None):
        if not epsilon > 0.0:
            raise ValueError(f"epsilon must be > 0, got {epsilon}")
        self.epsilon = float(epsilon)
        super().__init__(t0=math.exp(math.exp(1.0 + epsilon)) if t0 is None else t0, t_max=math.inf)

    @property
    def params(self) -> Dict[str, Any]:
        return {"epsilon": self.epsilon}

    def _base(self, t):
        return t * np.log(np.log(t)) ** self.epsilon

    def _base_derivative(self, t):
        log_t = np.log(t)
        loglog = np.log(log_t)
        return loglog ** self.epsilon + self.epsilon * loglog ** (self.epsilon - 1.0) / log_t


class ExpShape(OrliczShape):
    """e^{pt} - 1, finite up to t_max = 700/p"""

    family = "exp"

    def __init__(self, p: float = 1.0):
        if not p > 0.0:
            raise ValueError(f"exponential rate must be > 0, got {p}")
        self.p = float(p)
        super().__init__(t0=0.0, t_max=700.0 / p)

    @property
    def params(self) -> Dict[str, Any]:
        return {"p": self.p}

    def _base(self, t):
        return np.expm1(self.p * t)

    def _base_derivative(self, t):
        return self.p * np.exp(self.p * t)

    def _solve_inverse(self, targets):
        return np.log1p(targets) / self.p


class TableShape(OrliczShape):
    """Piecewise-linear convex shape through explicit nodes, extended by its last slope"""

    family = "table"

    def __init__(self, ts: Sequence[float], values: Sequence[float]):
        ts = np.asarray(ts, dtype=float)
        values = np.asarray(values, dtype=float)
        if ts.size < 2 or ts.size != values.size:
            raise ValueError("table needs at least two (t, φ) pairs of equal length")
        if ts[0] != 0.0 or values[0] != 0.0:
            raise ValueError("table must start at (0, 0)")
        if np.any(np.diff(ts) <= 0.0):
            raise ValueError("table t values must be strictly increasing")
        slopes = np.diff(values) / np.diff(ts)
        if np.any(slopes < 0.0) or np.any(np.diff(slopes) < -1e-12 * np.maximum(1.0, np.abs(slopes[1:]))):
            raise ValueError("table must be nondecreasing and convex")
        self.ts = ts
        self.values = values
        self.slopes = slopes
        super().__init__(t0=0.0, t_max=math.inf)

    @property
    def params(self) -> Dict[str, Any]:
        return {"ts": self.ts.tolist(), "values": self.values.tolist()}

    @property
    def derivative_bound(self) -> float:
        return float(self.slopes[-1])

    def describe(self) -> str:
        return f"table[{self.ts.size} nodes]"

    def _base(self, t):
        inside = np.interp(t, self.ts, self.values)
        beyond = self.values[-1] + self.slopes[-1] * (t - self.ts[-1])
        return np.where(t > self.ts[-1], beyond, inside)

    def _base_derivative(self, t):
        idx = np.searchsorted(self.ts, t, side="right") - 1
        return self.slopes[np.clip(idx, 0, self.slopes.size - 1)]

    def nodes(self) -> np.ndarray:
        return self.ts.copy()


class ConjugateShape(OrliczShape):
    """
    Numeric complementary function φ*(s) = max_{t≥0} (st - φ(t)).

    The maximizer solves φ′(t) = s; a node table of (t_i, φ′(t_i)) built at
    construction brackets it and vectorized bisection finishes the job. The
    table's own interpolation error, the largest relative gap between the
    chord of φ* and its two tangents over any node interval, is kept in
    ``table_gap``.
    """

    family = "conjugate"
    eager_conjugate = False

    def __init__(self, base: OrliczShape):
        self.base = base
        t_nodes = base.nodes()
        s_nodes = np.maximum.accumulate(np.asarray(base.derivative(t_nodes), dtype=float))
        finite = np.isfinite(s_nodes)
        self._t_nodes = t_nodes[finite]
        self._s_nodes = s_nodes[finite]
        super().__init__(t0=0.0, t_max=math.inf)
        self.table_gap = self._convexity_gap()
        logger.debug("conjugate of %s: %d nodes, table gap %.3g", base.describe(), self._t_nodes.size, self.table_gap)

    @property
    def params(self) -> Dict[str, Any]:
        return {"base": self.base.to_dict()}

    def describe(self) -> str:
        return f"conjugate({self.base.describe()})"

    def _convexity_gap(self) -> float:
        t, s = self._t_nodes, self._s_nodes
        phi = np.asarray(self.base.value(t), dtype=float)
        conj = s * t - phi
        dt = np.diff(t)
        ds = np.diff(s)
        ok = (dt > 0.0) & (ds > 0.0)
        if not np.any(ok):
            return 0.0
        cross = (phi[1:] - phi[:-1])[ok] / dt[ok]
        tangent = t[:-1][ok] * cross - phi[:-1][ok]
        chord = conj[:-1][ok] + (conj[1:] - conj[:-1])[ok] * (cross - s[:-1][ok]) / ds[ok]
        scale = np.maximum(np.abs(chord), 1e-300)
        return float(np.max(np.maximum(chord - tangent, 0.0) / scale))

    def _check_domain(self, s: np.ndarray) -> None:
        bound = self.base.derivative_bound
        if np.any(s > bound):
            raise ValueError(f"conjugate is infinite for s > sup φ′ = {bound:g}")

    def maximizer(self, s):
        """Smallest t with φ′(t) ≥ s, i.e. the point where st - φ(t) peaks"""
        arr = _as_nonnegative(s)
        self._check_domain(arr)
        flat = arr.ravel()
        idx = np.searchsorted(self._s_nodes, flat, side="left")
        inside = idx < self._s_nodes.size
        hi = np.where(inside, self._t_nodes[np.minimum(idx, self._t_nodes.size - 1)], self._t_nodes[-1])
        lo = np.where(idx > 0, self._t_nodes[np.maximum(idx - 1, 0)], 0.0)
        if np.any(~inside):
            hi[~inside] = grow_bracket(self.base.derivative, flat[~inside], self._t_nodes[-1], what="conjugate maximizer")
        out = solve_increasing(self.base.derivative, flat, lo, hi, what="conjugate maximizer")
        out = np.where(flat <= self._s_nodes[0], 0.0, out)
        return _like(s, out.reshape(arr.shape))

    def value(self, s):
        arr = _as_nonnegative(s)
        t = np.asarray(self.maximizer(arr), dtype=float)
        out = np.maximum(arr * t - np.asarray(self.base.value(t), dtype=float), 0.0)
        return _like(s, out)

    __call__ = value

    def derivative(self, s):
        return self.maximizer(s)

    def young_gap(self, x):
        t = np.asarray(self.maximizer(x), dtype=float)
        return _like(x, np.asarray(self.base.value(t), dtype=float))

    def _solve_inverse(self, targets):
        start = max(float(self._s_nodes[1]) if self._s_nodes.size > 1 else 1.0, 1e-12)
        hi = grow_bracket(self.value, targets, start, what="conjugate inverse")
        return solve_increasing(self.value, targets, np.zeros(targets.shape), hi, what="conjugate inverse")

    def inverse(self, u):
        arr = np.atleast_1d(_as_nonnegative(u, "inverse argument"))
        out = np.zeros(arr.shape, dtype=float)
        positive = arr > 0.0
        if np.any(positive):
            out[positive] = self._solve_inverse(arr[positive])
        return _like(u, out.reshape(np.shape(u)))

    def nodes(self) -> np.ndarray:
        return np.unique(self._s_nodes)

    def to_dict(self) -> Dict[str, Any]:
        return {"family": self.family, "params": self.params, "t0": 0.0}


def conjugate(shape: OrliczShape) -> ConjugateShape:
    """φ* as a shape, cached on the original"""
    return shape.conjugate()


def shape_from_spec(spec: str, field: str = "shape") -> OrliczShape:
    """
    Parse a shape spec::

        power:p[,t0]   psi:eps   loglog:eps   exp:p   identity
        table:t1/v1,t2/v2,...   (must start at 0/0)
    """
    family, args = parse_spec(spec, field)
    try:
        if family == "power":
            values = parse_floats(args, field)
            if len(values) not in (1, 2):
                raise ConfigError(field, "power takes p and an optional splice point")
            return PowerShape(*values)
        if family == "identity":
            return PowerShape(1.0)
        if family in ("psi", "loglog"):
            (eps,) = parse_floats(args, field, 1)
            return PsiShape(eps) if family == "psi" else LogLogShape(eps)
        if family == "exp":
            values = parse_floats(args, field)
            return ExpShape(*(values or [1.0]))
        if family == "table":
            pairs = [a.split("/") for a in args]
            if any(len(p) != 2 for p in pairs):
                raise ConfigError(field, "table entries must look like t/value")
            ts = parse_floats([p[0] for p in pairs], field)
            vs = parse_floats([p[1] for p in pairs], field)
            return TableShape(ts, vs)
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(field, str(exc))
    raise ConfigError(field, f"unknown shape family '{family}'")


def shape_from_dict(data: Dict[str, Any]) -> OrliczShape:
    family = data.get("family")
    params = data.get("params", {})
    t0 = data.get("t0")
    if family == "power":
        return PowerShape(params["p"], t0 or 0.0)
    if family == "psi":
        return PsiShape(params["epsilon"], t0)
    if family == "loglog":
        return LogLogShape(params["epsilon"], t0)
    if family == "exp":
        return ExpShape(params["p"])
    if family == "table":
        return TableShape(params["ts"], params["values"])
    if family == "conjugate":
        return ConjugateShape(shape_from_dict(params["base"]))
    raise ValueError(f"unknown shape family '{family}'")

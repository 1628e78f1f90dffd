"""
InterpIQ interpolation diagnostics: Carleson check, harmonic majorants, weight
classes and point-evaluation incompatibility.
"""

import logging
import math
from typing import Dict, Iterable, Optional, Sequence, Union

import numpy as np
import pandas as pd
from rich.console import Console
from rich.panel import Panel
from rich.table import Table

from ..harmonic.poisson import poisson_extension_many
from ..harmonic.weights import DEFAULT_SHADOW_C, ArcWeight, shadow_weight
from ..orlicz.norms import modular, pointeval_bound
from ..orlicz.shapes import LogLogShape, OrliczShape, PsiShape
from ..geometry.disk import phi_all
from ..sequences.base import GeneratedSequence, blaschke_sum
from ..sequences.section6 import (
    Section6Generator,
    far_field_estimate,
    first_stage,
    stagewise_phi,
    tail_bound,
)
from ..utils.numerics import pairwise_sum
from .models import (
    CARLESON,
    MAJORIZED,
    MEMBER,
    NOT_CARLESON,
    NOT_MAJORIZED,
    NOT_MEMBER,
    UNDECIDED,
    CarlesonResult,
    DiagnosticReport,
    WeightClassResult,
)

logger = logging.getLogger(__name__)
console = Console()

DELTA_MIN = 1e-6
SERIES_TERMS = 10 ** 6
SERIES_CHUNK = 1 << 18
SERIES_TARGET = 10.0
MAX_SERIES_TERMS = 10 ** 8
# relative slack for comparisons that are exact in real arithmetic
ROUNDING = 1e-12


class InterpolationAnalyzer:
    """Diagnostics of one sequence truncation"""

    def __init__(self, seq: GeneratedSequence, parallelism: int = 1, use_tail: bool = True):
        self.seq = seq
        self.parallelism = parallelism
        self.use_tail = use_tail
        self._phi: Optional[np.ndarray] = None
        self._tails: Optional[np.ndarray] = None

    @property
    def phi(self) -> np.ndarray:
        """φ_Λ at every point of the truncation, in sequence order"""
        if self._phi is None:
            self._phi = phi_all(self.seq, parallelism=self.parallelism)
        return self._phi

    @property
    def tails(self) -> np.ndarray:
        """Rigorous bound on what the omitted stages add to each φ_Λ(λ)"""
        if self._tails is None:
            self._tails = self._compute_tails()
        return self._tails

    def _compute_tails(self) -> np.ndarray:
        if not self.use_tail or self.seq.generator != Section6Generator.tag or len(self.seq) == 0:
            return np.zeros(len(self.seq))
        J_max = int(self.seq.params["N_max"])
        defects = self.seq.defects if self.seq.defects is not None else 1.0 - np.abs(self.seq.complex_points)
        # the bound only depends on |λ|
        cache: Dict[float, float] = {}
        out = np.empty(len(self.seq))
        for i, d in enumerate(defects):
            key = float(d)
            if key not in cache:
                cache[key] = tail_bound(self.seq, 1.0 - key, J_max, defect=key).bound
            out[i] = cache[key]
        return out

    def carleson_check(self, delta_min: float = DELTA_MIN) -> CarlesonResult:
        """
        inf |B_λ(λ)| and M = sup φ_Λ on the truncation.

        The tail-adjusted lower bound exp(-max(φ_Λ + tail)) decides the verdict
        against ``delta_min``.
        """
        if len(self.seq) == 0:
            return CarlesonResult(1.0, 0.0, CARLESON, 1.0, 0.0, -1, 0)
        phi = self.phi
        argmax = int(np.argmax(phi))
        M = float(phi[argmax])
        adjusted = float(np.max(phi + self.tails))
        inf_lower = math.exp(-adjusted)
        verdict = CARLESON if inf_lower >= delta_min else NOT_CARLESON
        logger.info("carleson: M=%.10g, inf=%.6g (tail-adjusted %.6g)", M, math.exp(-M), inf_lower)
        return CarlesonResult(
            inf_blaschke=math.exp(-M),
            M=M,
            verdict=verdict,
            inf_lower=inf_lower,
            max_tail=float(np.max(self.tails)),
            argmax=argmax,
            size=len(self.seq),
        )

    def _base_frame(self) -> pd.DataFrame:
        z = self.seq.complex_points
        stages = self.seq.stages if self.seq.stages is not None else np.full(len(self.seq), -1)
        return pd.DataFrame({
            "index": np.arange(len(self.seq)),
            "stage": stages,
            "re": z.real,
            "im": z.imag,
            "phi_lambda[nat]": self.phi,
            "tail_bound[nat]": self.tails,
        })

    def phi_report(self) -> DiagnosticReport:
        """φ_Λ and its tail bound at every point"""
        frame = self._base_frame()
        return DiagnosticReport(
            kind="phi",
            rows=frame,
            globals={
                "size": len(self.seq),
                "generator": self.seq.generator,
                "blaschke_sum": blaschke_sum(self.seq),
                "max_phi": float(self.phi.max()) if len(self.seq) else 0.0,
            },
        )

    def majorant_check(self, weight: ArcWeight) -> DiagnosticReport:
        """
        Compare P[w](λ) with φ_Λ(λ) at every point.

        deficit = P[w](λ) - φ_Λ(λ) on the truncation. The verdict is
        "majorized" when every deficit covers the tail bound, "not-majorized"
        when some deficit is negative (omitted stages only add to φ_Λ), and
        "undecided" in between.
        """
        frame = self._base_frame()
        majorant = poisson_extension_many(weight, self.seq.complex_points) if len(self.seq) else np.zeros(0)
        deficit = majorant - self.phi
        frame["majorant[nat]"] = majorant
        frame["deficit[nat]"] = deficit

        slack = ROUNDING * np.maximum(1.0, self.phi)
        if np.all(deficit - self.tails >= -slack):
            verdict = MAJORIZED
        elif np.any(deficit < -slack):
            verdict = NOT_MAJORIZED
        else:
            verdict = UNDECIDED
        worst = int(np.argmin(deficit)) if len(self.seq) else -1
        return DiagnosticReport(
            kind="majorant",
            rows=frame,
            globals={
                "size": len(self.seq),
                "min_deficit": float(deficit.min()) if len(self.seq) else 0.0,
                "worst_index": worst,
                "max_tail": float(self.tails.max()) if len(self.seq) else 0.0,
                "weight_mass": weight.total_mass,
            },
            verdicts={"majorant": verdict},
        )

    def minimal_shadow_constant(self, c: float = DEFAULT_SHADOW_C) -> float:
        """
        Least c₀ with P[c₀ u₁] ≥ φ_Λ + tail on the truncation, u₁ the shadow weight with c₀ = 1.

        Returns 0 for sequences with φ_Λ ≡ 0.
        """
        if len(self.seq) == 0:
            return 0.0
        unit = poisson_extension_many(shadow_weight(self.seq, 1.0, c), self.seq.complex_points)
        need = self.phi + self.tails
        if np.any((unit <= 0.0) & (need > 0.0)):
            return math.inf
        ratios = np.where(need > 0.0, need / np.where(unit > 0.0, unit, 1.0), 0.0)
        return float(np.max(ratios)) * (1.0 + ROUNDING)

    def shadow_majorant_check(self, c: float = DEFAULT_SHADOW_C) -> DiagnosticReport:
        """majorant_check of the shadow weight at its minimal constant"""
        c0 = self.minimal_shadow_constant(c)
        if not math.isfinite(c0) or c0 == 0.0:
            report = self.majorant_check(ArcWeight.constant(0.0))
        else:
            report = self.majorant_check(shadow_weight(self.seq, c0, c))
        report.globals.update({"c0": c0, "c": c})
        return report

    def display_carleson(self, result: Optional[CarlesonResult] = None):
        result = result or self.carleson_check()
        color = "green" if result.verdict == CARLESON else "yellow"
        console.print(Panel.fit(
            f"[bold]Points:[/bold] {result.size}\n"
            f"[bold]inf |B_λ(λ)|:[/bold] {result.inf_blaschke:.10g}\n"
            f"[bold]M = sup φ_Λ:[/bold] {result.M:.10g}\n"
            f"[bold]Tail-adjusted inf:[/bold] {result.inf_lower:.6g}\n"
            f"[bold]Verdict:[/bold] [{color}]{result.verdict}[/{color}]",
            title=f"Carleson check: {self.seq.generator}",
            border_style="blue",
        ))

    def display_report(self, report: DiagnosticReport, limit: int = 15):
        table = Table(title=f"{report.kind} (first {limit} rows)")
        columns = [c for c in report.rows.columns if c not in ("index",)]
        for name in columns:
            table.add_column(name, justify="right")
        for _, row in report.rows.head(limit).iterrows():
            table.add_row(*[_cell(row[name]) for name in columns])
        console.print(table)
        verdicts = ", ".join(f"{k}: [cyan]{v}[/cyan]" for k, v in report.verdicts.items())
        console.print(Panel.fit(verdicts or "no verdicts", title="Verdicts", border_style="green"))


def _cell(value) -> str:
    if isinstance(value, (float, np.floating)):
        return f"{value:.6g}"
    return str(value)


# -- weight classes ---------------------------------------------------------


def _series_logs(family: str):
    """(ℓ, s, density) for the shadow series of a stage family"""
    if family == "psi":
        return (
            lambda x: np.log(x),
            lambda x: 1.0 / np.log(x),
            lambda k, eps: k * np.log(k) ** (1.0 + eps),
        )
    return (
        lambda x: np.log(np.log(x)),
        lambda x: 1.0 / (np.log(np.log(x)) * np.log(x)),
        lambda k, eps: k * np.log(k) * np.log(np.log(k)) ** (1.0 + eps),
    )


def shadow_series_terms(shape: OrliczShape, epsilon: float, family: str, start: int, stop: int) -> np.ndarray:
    """(ψ(k+1) - ψ(k)) / D(k) for start ≤ k < stop"""
    _, _, density = _series_logs(family)
    k = np.arange(start, stop, dtype=float)
    jumps = np.asarray(shape.value(k + 1.0), dtype=float) - np.asarray(shape.value(k), dtype=float)
    return jumps / density(k, epsilon)


def shadow_class_check(
    epsilon: float,
    shape: OrliczShape,
    family: str = "psi",
    K: int = SERIES_TERMS,
    threshold: Optional[float] = None,
    target: float = SERIES_TARGET,
) -> WeightClassResult:
    """
    Membership of the shadow of the full staged sequence in L^ψ.

    The shadow equals k on a set of measure ≍ 1/D(k), so J_ψ(u) is compared with
    the series Σ (ψ(k+1) - ψ(k))/D(k). Terms up to K are summed exactly; the rest
    is enclosed by integrals of ℓ^{δ-1-ε} dℓ (ℓ = ln x, or ln ln x for loglog),
    from below by ψ′(k) ≥ ℓ(k)^δ and from above by ψ′(k+1) ≤ ℓ(k+1)^δ (1 + δ s).

    For δ ≥ ε the series diverges and ``ln_K_exceed`` is ln K for a K at which
    the partial sums provably exceed ``target``.
    """
    if shape.family != family:
        raise ValueError(f"shadow series needs a {family} shape, got {shape.family}")
    delta = shape.epsilon
    ell, s, _ = _series_logs(family)
    start = first_stage(family)
    K0 = max(int(K), int(math.ceil(shape.t0)) + 1)
    if K0 > MAX_SERIES_TERMS:
        raise ValueError(f"splice point {shape.t0:.3g} needs more than {MAX_SERIES_TERMS} exact terms")

    chunks = []
    for lo in range(start, K0 + 1, SERIES_CHUNK):
        chunks.append(shadow_series_terms(shape, epsilon, family, lo, min(lo + SERIES_CHUNK, K0 + 1)))
    terms = np.concatenate(chunks)
    partial = pairwise_sum(terms)
    logger.debug("shadow series: S_%d = %.12g (δ=%g, ε=%g)", K0, partial, delta, epsilon)

    if delta < epsilon:
        gap = epsilon - delta
        lower = float(ell(K0 + 1.0)) ** (-gap) / gap
        inflation = (float(ell(K0 + 2.0)) / float(ell(K0 + 1.0))) ** delta * (1.0 + delta * float(s(K0 + 1.0)))
        upper = inflation * float(ell(float(K0))) ** (-gap) / gap
        if threshold is None:
            verdict = MEMBER
        elif partial + upper <= threshold:
            verdict = MEMBER
        elif partial + lower > threshold:
            verdict = NOT_MEMBER
        else:
            verdict = UNDECIDED
        return WeightClassResult(
            modular=partial + 0.5 * (lower + upper),
            verdict=verdict,
            remainder_bound=upper,
            partial_sum=partial,
            K=K0,
            lower=partial + lower,
            upper=partial + upper,
        )

    cumulative = np.cumsum(terms)
    if cumulative[-1] >= target:
        k_hit = start + int(np.argmax(cumulative >= target))
        ln_k = math.log(k_hit)
    else:
        # Σ_{K0<k≤K} a_k ≥ F(ℓ(K+1)) - F(ℓ(K0+1)), F = ln ℓ or ℓ^{δ-ε}/(δ-ε)
        missing = target - partial
        ell0 = float(ell(K0 + 1.0))
        if delta == epsilon:
            ell_star = ell0 * math.exp(missing)
        else:
            power = delta - epsilon
            ell_star = (ell0 ** power + power * missing) ** (1.0 / power)
        ln_k = ell_star if family == "psi" else math.exp(ell_star)
    return WeightClassResult(
        modular=math.inf,
        verdict=NOT_MEMBER,
        remainder_bound=math.inf,
        partial_sum=partial,
        K=K0,
        lower=math.inf,
        upper=math.inf,
        ln_K_exceed=ln_k,
    )


def weight_class_check(
    weight: Union[ArcWeight, Section6Generator],
    shape: OrliczShape,
    K: int = SERIES_TERMS,
    threshold: Optional[float] = None,
) -> WeightClassResult:
    """
    J_φ(w) and whether w lies in L^φ.

    An ArcWeight has an exact finite modular and is always a member (or
    decided against ``threshold``). A Section6Generator stands for the shadow
    of its untruncated sequence and goes through the series test.
    """
    if isinstance(weight, Section6Generator):
        return shadow_class_check(weight.epsilon, shape, weight.family, K=K, threshold=threshold)
    value = modular(shape, weight)
    if threshold is None or value <= threshold:
        verdict = MEMBER
    else:
        verdict = NOT_MEMBER
    return WeightClassResult(modular=value, verdict=verdict, remainder_bound=0.0)


# -- point evaluation ---------------------------------------------------------


def growth_shape(epsilon: float, family: str = "psi") -> OrliczShape:
    return PsiShape(epsilon) if family == "psi" else LogLogShape(epsilon)


def growth_model(defect: float, epsilon: float, family: str = "psi") -> float:
    """
    Leading-order growth of φ_Λ at radius 1 - d:
    4/(d ln^ε ln(1/d)) for psi, 4/(d (ln ln ln(1/d))^ε) for loglog; nan before the logs turn positive.
    """
    inner = _model_log(defect, family)
    if not inner > 0.0:
        return math.nan
    return 4.0 / (defect * inner ** epsilon)


def _model_log(defect: float, family: str) -> float:
    value = math.log(math.log(1.0 / defect))
    if family == "loglog":
        return math.log(value) if value > 0.0 else math.nan
    return value


def pointeval_incompatibility(
    epsilon: float,
    n_range: Iterable[int],
    J_offset: int = 16,
    family: str = "psi",
    c_f_grid: Sequence[float] = (0.5, 1.0, 2.0),
    parallelism: int = 1,
) -> pd.DataFrame:
    """
    φ_Λ(λ_{n,0}) against the point-evaluation ceiling ψ_ε⁻¹(c_f/(1-|λ_n|)).

    φ_Λ is the stagewise sum up to stage n + J_offset plus the analytic far field
    of the infinite sequence. Rows where ln ln(1/(1-|λ|)) < 1 are flagged as
    pre-asymptotic.
    """
    shape = growth_shape(epsilon, family)
    grid = sorted({float(c) for c in c_f_grid} | {1.0})
    rows = []
    for n in n_range:
        d = 2.0 ** (-n)
        J_max = n + J_offset
        phi_trunc = stagewise_phi(epsilon, n, 0, J_max, family=family, parallelism=parallelism)
        far = far_field_estimate(epsilon, 1.0 - d, J_max, family=family, defect=d)
        total = phi_trunc + far.estimate
        bounds = {c: pointeval_bound(shape, c, 1.0 - d) for c in grid}
        model = growth_model(d, epsilon, family)
        inner = _model_log(d, family)
        row = {
            "n": n,
            "k": 0,
            "re": 1.0 - d,
            "im": 0.0,
            "defect": d,
            "J_max": J_max,
            "phi_truncated[nat]": phi_trunc,
            "tail_bound[nat]": far.bound,
            "far_field[nat]": far.estimate,
            "far_field_uncertainty[nat]": far.uncertainty,
            "phi_total[nat]": total,
        }
        for c in grid:
            row[f"bound_cf{c:g}[nat]"] = bounds[c]
        row["model[nat]"] = model
        row["ratio"] = total / bounds[1.0]
        row["model_ratio"] = total / model if math.isfinite(model) else math.nan
        row["R"] = total * d * inner ** epsilon if inner > 0.0 else math.nan
        row["pre_asymptotic"] = bool(not math.log(math.log(1.0 / d)) >= 1.0)
        rows.append(row)
        logger.info("n=%d: φ=%.10g (truncated %.10g, far field %.6g ± %.2g)", n, total, phi_trunc, far.estimate, far.uncertainty)
    return pd.DataFrame(rows)

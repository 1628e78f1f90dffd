"""
Result records shared by the diagnostics: per-λ report tables and verdicts.
"""

from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

import numpy as np
import pandas as pd

# three-valued verdict vocabulary
MAJORIZED = "majorized"
NOT_MAJORIZED = "not-majorized"
CARLESON = "carleson"
NOT_CARLESON = "not-carleson-at-truncation"
MEMBER = "member"
NOT_MEMBER = "not-member"
UNDECIDED = "undecided"

VERDICTS = (MAJORIZED, NOT_MAJORIZED, CARLESON, NOT_CARLESON, MEMBER, NOT_MEMBER, UNDECIDED)


def to_plain(value: Any) -> Any:
    """numpy scalars and complex numbers as JSON-ready values"""
    if isinstance(value, (np.floating, np.integer, np.bool_)):
        return value.item()
    if isinstance(value, complex):
        return [value.real, value.imag]
    if isinstance(value, dict):
        return {str(k): to_plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_plain(v) for v in value]
    return value


@dataclass
class DiagnosticReport:
    """
    Per-λ rows plus global fields of one diagnostic run.

    ``rows`` columns always include ``phi_lambda[nat]`` and ``tail_bound[nat]``;
    majorant runs add ``majorant[nat]`` and ``deficit[nat]``.
    """

    kind: str
    rows: pd.DataFrame
    globals: Dict[str, Any] = field(default_factory=dict)
    verdicts: Dict[str, str] = field(default_factory=dict)

    @property
    def verdict(self) -> Optional[str]:
        """The first verdict recorded, the headline of the run"""
        return next(iter(self.verdicts.values()), None)

    @property
    def undecided(self) -> List[str]:
        return [name for name, v in self.verdicts.items() if v == UNDECIDED]

    def to_frame(self) -> pd.DataFrame:
        return self.rows

    def to_dict(self) -> Dict[str, Any]:
        return {
            "kind": self.kind,
            "globals": to_plain(self.globals),
            "verdicts": dict(self.verdicts),
            "rows": int(len(self.rows)),
        }


@dataclass
class CarlesonResult:
    """inf |B_λ(λ)| and sup φ_Λ on a truncation"""

    inf_blaschke: float
    M: float
    verdict: str
    inf_lower: float
    max_tail: float
    argmax: int
    size: int

    def to_dict(self) -> Dict[str, Any]:
        return {
            "inf_blaschke": self.inf_blaschke,
            "M": self.M,
            "verdict": self.verdict,
            "inf_lower": self.inf_lower,
            "max_tail": self.max_tail,
            "argmax": self.argmax,
            "size": self.size,
        }


@dataclass
class WeightClassResult:
    """Modular of a weight, or of a generator's shadow, with the series remainder"""

    modular: float
    verdict: str
    remainder_bound: float = 0.0
    partial_sum: Optional[float] = None
    K: Optional[int] = None
    lower: Optional[float] = None
    upper: Optional[float] = None
    # ln K at which the partial sums provably exceed the divergence target
    ln_K_exceed: Optional[float] = None

    def to_dict(self) -> Dict[str, Any]:
        return {
            "modular": self.modular,
            "verdict": self.verdict,
            "remainder_bound": self.remainder_bound,
            "partial_sum": self.partial_sum,
            "K": self.K,
            "lower": self.lower,
            "upper": self.upper,
            "ln_K_exceed": self.ln_K_exceed,
        }

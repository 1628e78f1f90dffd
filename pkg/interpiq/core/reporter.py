"""
InterpIQ reporting: the staged-sequence report and byte-stable CSV/JSON output
with a sha256 manifest next to every result.
"""

import logging
import math
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Sequence

import numpy as np
import pandas as pd
from rich.console import Console
from rich.panel import Panel
from rich.table import Table

from .. import __version__
from ..harmonic.weights import shadow_touch_constant
from ..sequences.base import separation_constant
from ..sequences.section6 import gen_section6
from ..utils.helpers import sha256_file, write_json
from ..utils.numerics import ConvergenceError
from .analyzer import growth_shape, pointeval_incompatibility, shadow_class_check
from .models import DiagnosticReport, to_plain

logger = logging.getLogger(__name__)
console = Console()

FAR_FIELD_RTOL = 1e-2
DEFAULT_C_F_GRID = (0.5, 1.0, 2.0)


def write_frame(frame: pd.DataFrame, path: Path) -> Path:
    """CSV with a header row, no index, round-trip float formatting and LF endings"""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    frame.to_csv(path, index=False, lineterminator="\n")
    return path


def manifest_for(outputs: Iterable[Path], config: Dict[str, Any], extra: Optional[Dict[str, Any]] = None) -> Dict[str, Any]:

    return {
        "package": "interpiq",
        "version": __version__,
        "config": to_plain(config),
        "tolerances": {"rtol": config.get("rtol"), "max_iter": config.get("max_iter")},
        "outputs": {Path(p).name: sha256_file(Path(p)) for p in outputs},
        **(extra or {}),
    }


class ReportWriter:
    """Writes results under one output directory, each with a ``<stem>.manifest.json``"""

    def __init__(self, output_dir: str = "results", config: Optional[Dict[str, Any]] = None):
        self.output_dir = Path(output_dir)
        self.output_dir.mkdir(parents=True, exist_ok=True)
        self.config = dict(config or {})

    def _manifest(self, stem: str, outputs: List[Path], extra: Optional[Dict[str, Any]] = None) -> Path:
        path = self.output_dir / f"{stem}.manifest.json"
        write_json(manifest_for(outputs, self.config, extra), path)
        return path

    def write_frame(self, frame: pd.DataFrame, stem: str, extra: Optional[Dict[str, Any]] = None) -> List[Path]:
        csv_path = write_frame(frame, self.output_dir / f"{stem}.csv")
        return [csv_path, self._manifest(stem, [csv_path], extra)]

    def write_json(self, data: Dict[str, Any], stem: str) -> List[Path]:
        json_path = write_json(to_plain(data), self.output_dir / f"{stem}.json")
        return [json_path, self._manifest(stem, [json_path])]

    def write_report(self, report: DiagnosticReport, stem: str) -> List[Path]:
        """Rows to ``<stem>.csv``, globals and verdicts to ``<stem>.json``, then the manifest"""
        csv_path = write_frame(report.rows, self.output_dir / f"{stem}.csv")
        json_path = write_json(report.to_dict(), self.output_dir / f"{stem}.json")
        manifest = self._manifest(stem, [csv_path, json_path], {"verdicts": dict(report.verdicts)})
        logger.info("wrote %s, %s and %s", csv_path.name, json_path.name, manifest.name)
        return [csv_path, json_path, manifest]


def _trend_checks(rows: pd.DataFrame) -> Dict[str, Any]:
    settled = rows[~rows["pre_asymptotic"]]
    if settled.empty:
        return {"R_min": math.nan, "R_max": math.nan, "R_spread": math.nan, "R_nondecreasing": None, "ratio_increasing": None}
    R = settled["R"].to_numpy()
    # R moves by at most the far-field uncertainty scaled the same way
    slack = (settled["far_field_uncertainty[nat]"] * settled["R"] / settled["phi_total[nat]"]).to_numpy()
    ratio = settled["ratio"].to_numpy()
    return {
        "R_min": float(R.min()),
        "R_max": float(R.max()),
        "R_spread": float(R.max() / R.min()),
        "R_nondecreasing": bool(np.all(np.diff(R) >= -(slack[1:] + slack[:-1]))),
        "ratio_increasing": bool(np.all(np.diff(ratio) > 0.0)),
    }


def section6_report(
    epsilon: float,
    n_range: Sequence[int],
    J_offset: int = 16,
    family: str = "psi",
    c_f_grid: Sequence[float] = DEFAULT_C_F_GRID,
    parallelism: int = 1,
    strict: bool = False,
    shadow_terms: int = 10 ** 6,
) -> DiagnosticReport:
    """
    Growth, incompatibility and shadow-membership report for the staged sequence.

    Each row is λ_{n,0} with φ_Λ summed to stage n + J_offset plus the analytic far
    field, the point-evaluation ceilings, the growth model, R(n), the shadow
    touch constant and the separation constant of the stage-n truncation.

    Raises:
        ConvergenceError: with ``strict`` when the far-field uncertainty exceeds
            1% of φ_Λ at some row
    """
    n_range = list(n_range)
    rows = pointeval_incompatibility(epsilon, n_range, J_offset, family, c_f_grid, parallelism)
    rows["touch_constant"] = [shadow_touch_constant(n) for n in n_range]
    rows["separation"] = [separation_constant(gen_section6(epsilon, n, family)) for n in n_range]

    relative = (rows["far_field_uncertainty[nat]"] / rows["phi_total[nat]"]).to_numpy()
    within = bool(np.all(relative < FAR_FIELD_RTOL))
    if not within:
        worst = int(np.argmax(relative))
        message = f"far-field uncertainty {relative[worst]:.3g} of φ_Λ at n={n_range[worst]} exceeds {FAR_FIELD_RTOL:g}"
        if strict:
            raise ConvergenceError("far-field estimate", J_offset, message)
        logger.error(message)

    verdicts: Dict[str, str] = {}
    shadows: Dict[str, Any] = {}
    for delta in (0.5 * epsilon, epsilon):
        result = shadow_class_check(epsilon, growth_shape(delta, family), family, K=shadow_terms)
        key = f"shadow_delta{delta:g}"
        verdicts[key] = result.verdict
        shadows[key] = result.to_dict()

    globals_ = {
        "epsilon": epsilon,
        "family": family,
        "J_offset": J_offset,
        "n_range": n_range,
        "max_relative_uncertainty": float(relative.max()),
        "far_field_within_1pct": within,
        "min_separation": float(rows["separation"].min()),
        "shadows": shadows,
        **_trend_checks(rows),
    }
    return DiagnosticReport(kind="section6", rows=rows, globals=globals_, verdicts=verdicts)


def display_section6(report: DiagnosticReport):
    table = Table(title=f"Staged sequence, ε = {report.globals['epsilon']:g}")
    for name in ("n", "phi_total[nat]", "far_field[nat]", "bound_cf1[nat]", "model[nat]", "ratio", "R", "separation"):
        table.add_column(name, justify="right")
    for _, row in report.rows.iterrows():
        table.add_row(
            str(int(row["n"])),
            f"{row['phi_total[nat]']:.8g}",
            f"{row['far_field[nat]']:.4g}",
            f"{row['bound_cf1[nat]']:.6g}",
            f"{row['model[nat]']:.6g}",
            f"{row['ratio']:.5g}",
            f"{row['R']:.5g}",
            f"{row['separation']:.4g}",
        )
    console.print(table)
    g = report.globals
    verdicts = "\n".join(f"[bold]{k}:[/bold] [cyan]{v}[/cyan]" for k, v in report.verdicts.items())
    console.print(Panel.fit(
        f"[bold]R spread:[/bold] {g['R_spread']:.4g}\n"
        f"[bold]Far field within 1%:[/bold] {g['far_field_within_1pct']}\n"
        f"[bold]Min separation:[/bold] {g['min_separation']:.6g}\n{verdicts}",
        title="Summary",
        border_style="green",
    ))

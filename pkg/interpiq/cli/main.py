#!/usr/bin/env python3
"""
InterpIQ - Hardy-Orlicz Interpolation Lab

Command-line harness for the interpolation diagnostics. Every command writes
its results under the output directory together with a sha256 manifest.
"""

import json
import math
from pathlib import Path
from typing import Dict, List, Optional

import numpy as np
import pandas as pd
import typer
from rich.console import Console
from rich.panel import Panel
from rich.table import Table

from .. import __version__, __description__
from ..config import RunConfig
from ..core.analyzer import InterpolationAnalyzer, weight_class_check
from ..core.hoffman import display_fit, hoffman_split, hoffman_verify
from ..core.models import UNDECIDED
from ..core.reporter import ReportWriter, display_section6, section6_report
from ..core.searcher import DualSearcher
from ..dyadic import color_class, occupied_squares, per_square_minimizer, split4, squares_frame
from ..geometry.disk import phi_all
from ..harmonic.balayage import Balayage, dual_norm_details, weight_ascent
from ..harmonic.weights import DEFAULT_SHADOW_C, measure_from_spec, shadow_touch_constant, shadow_weight, weight_from_spec
from ..orlicz.conditions import delta2_probe, is_strongly_convex, nabla2_probe, tilde_delta2_probe
from ..orlicz.norms import fnorm, indicator_norm, luxemburg_norm, modular, orlicz_norm
from ..orlicz.shapes import shape_from_spec
from ..sequences import build_sequence, gen_perturbed_pairs, perturbed_pair_residuals, separation_constant
from ..sequences.section6 import Section6Generator
from ..utils.helpers import parse_range, parse_spec
from ..utils.log import setup_logging
from ..utils.validators import ConfigError

# Initialize Typer app and Rich console
app = typer.Typer(
    name="interpiq",
    help="🔬 InterpIQ - Hardy-Orlicz Interpolation Lab",
    rich_markup_mode="rich",
)
console = Console()


@app.callback()
def main(
    ctx: typer.Context,
    config: Optional[Path] = typer.Option(None, "--config", help="JSON run configuration"),
    output_dir: Optional[str] = typer.Option(None, "--output-dir", "-o", help="Directory for results and manifests"),
    parallelism: Optional[int] = typer.Option(None, "--parallelism", "-j", help="Worker threads (results do not depend on it)"),
    strict: bool = typer.Option(False, "--strict", help="Exit 1 when a verdict is undecided"),
    verbose: bool = typer.Option(False, "--verbose", "-v", help="Log progress"),
    debug: bool = typer.Option(False, "--debug", help="Log everything"),
):
    """
    🔬 InterpIQ - Hardy-Orlicz Interpolation Lab

    Blaschke products, Orlicz norms, Poisson balayage and the staged sequence.
    """
    setup_logging(verbose=verbose, debug=debug)
    try:
        base = RunConfig.from_json(config) if config is not None else RunConfig()
        ctx.obj = base.merged(output_dir=output_dir, parallelism=parallelism, strict=strict or None)
    except ConfigError as e:
        _abort(e)


def _abort(error: Exception):
    """Config errors exit 2 with a JSON diagnostic, everything else exits 1"""
    if isinstance(error, ConfigError):
        console.print(f"[red]❌ Invalid configuration ({error.field}): {error.reason}[/red]")
        typer.echo(json.dumps(error.to_dict(), sort_keys=True))
        raise typer.Exit(2)
    console.print(f"[red]❌ {error}[/red]")
    raise typer.Exit(1)


def _run_config(ctx: typer.Context, command: str, **overrides) -> RunConfig:
    base = ctx.obj if isinstance(ctx.obj, RunConfig) else RunConfig()
    return base.merged(command=command, **overrides)


def _writer(run: RunConfig, **options) -> ReportWriter:
    config = run.to_dict()
    config["options"] = {k: v for k, v in sorted(options.items())}
    return ReportWriter(run.output_dir, config)


def _stem(run: RunConfig) -> str:
    return run.command.replace("-", "_")


def _finish(run: RunConfig, paths: List[Path], verdicts: Optional[Dict[str, str]] = None):
    for path in paths:
        console.print(f"[green]✅ Wrote {path}[/green]")
    undecided = [name for name, v in (verdicts or {}).items() if v == UNDECIDED]
    if run.strict and undecided:
        console.print(f"[yellow]⚠️ Undecided under --strict: {', '.join(undecided)}[/yellow]")
        raise typer.Exit(1)


@app.command()
def version():
    """📦 Show the InterpIQ version"""
    console.print(Panel.fit(
        f"[bold]InterpIQ[/bold] {__version__}\n{__description__}",
        title="🔬 InterpIQ",
    ))


@app.command()
def generate(
    ctx: typer.Context,
    gen: Optional[str] = typer.Option(None, "--gen", "-g", help="Generator spec, e.g. radial:0.5,30 or section6:1,10"),
    eta: Optional[float] = typer.Option(None, "--eta", help="Double every point with a partner at φ-distance eta"),
):
    """🌀 Generate a sequence truncation"""
    try:
        run = _run_config(ctx, "generate", gen=gen)
        seq = build_sequence(run.gen)
        writer = _writer(run, eta=eta)
        stem = _stem(run)
        if eta is not None:
            etas = [eta] * len(seq)
            residuals = perturbed_pair_residuals(seq, etas, parallelism=run.parallelism)
            seq = gen_perturbed_pairs(seq, etas)
            frame = pd.DataFrame({"index": np.arange(residuals.size), "residual[nat]": residuals})
            paths = writer.write_frame(frame, f"{stem}_residuals")
        else:
            paths = []
        paths += writer.write_frame(seq.to_frame(), stem)
        paths += writer.write_json(seq.to_dict(), f"{stem}_points")
        console.print(Panel.fit(
            f"[bold]Generator:[/bold] {seq.generator}\n"
            f"[bold]Points:[/bold] {len(seq)}\n"
            f"[bold]Separation:[/bold] {separation_constant(seq):.6g}",
            title="🌀 Sequence",
        ))
    except Exception as e:
        _abort(e)
    _finish(run, paths)


@app.command("phi-lambda")
def phi_lambda(
    ctx: typer.Context,
    gen: Optional[str] = typer.Option(None, "--gen", "-g", help="Generator spec"),
):
    """📐 φ_Λ(λ) = log 1/|B_λ(λ)| at every point"""
    try:
        run = _run_config(ctx, "phi-lambda", gen=gen)
        analyzer = InterpolationAnalyzer(build_sequence(run.gen), parallelism=run.parallelism)
        report = analyzer.phi_report()
        analyzer.display_report(report)
        paths = _writer(run).write_report(report, _stem(run))
    except Exception as e:
        _abort(e)
    _finish(run, paths)


@app.command()
def carleson(
    ctx: typer.Context,
    gen: Optional[str] = typer.Option(None, "--gen", "-g", help="Generator spec"),
    delta_min: float = typer.Option(1e-6, "--delta-min", help="Least acceptable inf |B_λ(λ)|"),
):
    """🎯 Carleson check: inf |B_λ(λ)| over the truncation"""
    try:
        run = _run_config(ctx, "carleson", gen=gen)
        analyzer = InterpolationAnalyzer(build_sequence(run.gen), parallelism=run.parallelism)
        result = analyzer.carleson_check(delta_min)
        analyzer.display_carleson(result)
        paths = _writer(run, delta_min=delta_min).write_json(result.to_dict(), _stem(run))
    except Exception as e:
        _abort(e)
    _finish(run, paths, {"carleson": result.verdict})


@app.command("orlicz-norm")
def orlicz_norm_command(
    ctx: typer.Context,
    shape: Optional[str] = typer.Option(None, "--shape", "-s", help="Shape spec, e.g. psi:1 or power:2"),
    weight: Optional[str] = typer.Option(None, "--weight", "-w", help="Weight spec, e.g. indicator:0.1"),
    gen: Optional[str] = typer.Option(None, "--gen", "-g", help="Sequence for shadow weights"),
):
    """📏 Modular, Luxemburg, Amemiya and F-norms of a boundary weight"""
    try:
        run = _run_config(ctx, "orlicz-norm", shape=shape, weight=weight, gen=gen)
        phi = shape_from_spec(run.shape)
        seq = build_sequence(run.gen) if run.gen else None
        w = weight_from_spec(run.weight, seq)
        result = {
            "shape": phi.to_dict(),
            "modular": modular(phi, w),
            "luxemburg": luxemburg_norm(phi, w, rtol=run.rtol, max_iter=run.max_iter),
            "orlicz": orlicz_norm(phi, w, rtol=run.rtol, max_iter=run.max_iter),
            "fnorm": fnorm(phi, w, rtol=run.rtol, max_iter=run.max_iter),
        }
        family, args = parse_spec(run.weight, "weight")
        if family == "indicator":
            result["indicator_oracle"] = indicator_norm(phi, float(args[0]))

        table = Table(title=f"Norms of {run.weight} for {phi.describe()}")
        table.add_column("quantity", style="cyan")
        table.add_column("value", justify="right")
        for name in ("modular", "luxemburg", "orlicz", "fnorm", "indicator_oracle"):
            if name in result:
                table.add_row(name, f"{result[name]:.12g}")
        console.print(table)
        paths = _writer(run).write_json(result, _stem(run))
    except Exception as e:
        _abort(e)
    _finish(run, paths)


@app.command()
def conjugate(
    ctx: typer.Context,
    shape: Optional[str] = typer.Option(None, "--shape", "-s", help="Shape spec"),
    s_min: float = typer.Option(1e-2, "--s-min", help="Smallest slope"),
    s_max: float = typer.Option(1e2, "--s-max", help="Largest slope"),
    points: int = typer.Option(200, "--points", help="Log-spaced samples"),
):
    """🔁 Tabulate the complementary function φ*(s)"""
    try:
        run = _run_config(ctx, "conjugate", shape=shape)
        phi = shape_from_spec(run.shape)
        if not 0.0 < s_min < s_max:
            raise ConfigError("s_range", f"need 0 < s_min < s_max, got {s_min}, {s_max}")
        if points < 2:
            raise ConfigError("points", f"need at least 2 samples, got {points}")
        conj = phi.conjugate()
        top = min(s_max, phi.derivative_bound)
        s = np.geomspace(s_min, top, points)
        frame = pd.DataFrame({
            "s": s,
            "conjugate": conj.value(s),
            "maximizer": conj.maximizer(s),
        })
        frame["biconjugate_at_maximizer"] = frame["s"] * frame["maximizer"] - frame["conjugate"]
        console.print(Panel.fit(
            f"[bold]Shape:[/bold] {phi.describe()}\n"
            f"[bold]Samples:[/bold] {points} on [{s_min:g}, {top:g}]\n"
            f"[bold]Table gap:[/bold] {conj.table_gap:.3g}",
            title="🔁 Conjugate",
        ))
        paths = _writer(run, s_min=s_min, s_max=s_max, points=points).write_frame(
            frame, _stem(run), {"table_gap": conj.table_gap}
        )
    except Exception as e:
        _abort(e)
    _finish(run, paths)


@app.command()
def balayage(
    ctx: typer.Context,
    measure: Optional[str] = typer.Option(None, "--measure", "-m", help="Measure spec, e.g. atoms:0.5/1,0.9j/2"),
    shape: Optional[str] = typer.Option(None, "--shape", "-s", help="Shape spec"),
    kind: str = typer.Option("orlicz", "--kind", help="Dual norm: orlicz, luxemburg or sup"),
    ascent: bool = typer.Option(False, "--ascent", help="Also run the weight ascent"),
    grid_base: Optional[int] = typer.Option(None, "--grid-base", help="Uniform boundary nodes"),
    grid_density: Optional[float] = typer.Option(None, "--grid-density", help="Local refinement factor"),
):
    """🌊 Poisson balayage of a disk measure and its dual norm"""
    try:
        run = _run_config(ctx, "balayage", measure=measure, shape=shape, grid_base=grid_base, grid_density=grid_density)
        mu = measure_from_spec(run.measure)
        phi = shape_from_spec(run.shape)
        samples = Balayage(mu, run.grid_base, run.grid_density, run.parallelism).grid()
        dual = dual_norm_details(mu, phi, kind, run.grid_base, run.grid_density, parallelism=run.parallelism)
        result = {"measure": mu.to_dict(), "dual_norm": dual.to_dict()}
        lines = [
            f"[bold]Atoms:[/bold] {len(mu)}    [bold]Mass:[/bold] {mu.total_mass:.6g}",
            f"[bold]Dual norm ({kind}):[/bold] {dual.value:.10g}",
            f"[bold]Refinement change:[/bold] {dual.relative_change:.3g}",
        ]
        if ascent:
            found = weight_ascent(mu, phi, run.grid_base, run.grid_density)
            result["ascent"] = {
                "pairing": found.pairing,
                "dual_norm": found.dual_norm,
                "ratio": found.ratio,
                "gamma": found.gamma,
                "evaluations": found.evaluations,
            }
            lines.append(f"[bold]Ascent pairing:[/bold] {found.pairing:.10g} ({found.ratio:.4f} of the dual norm)")
        console.print(Panel.fit("\n".join(lines), title="🌊 Balayage"))
        writer = _writer(run, kind=kind, ascent=ascent)
        paths = writer.write_frame(samples.to_frame(), _stem(run))
        paths += writer.write_json(result, f"{_stem(run)}_norm")
    except Exception as e:
        _abort(e)
    _finish(run, paths)


@app.command("majorant-check")
def majorant_check(
    ctx: typer.Context,
    gen: Optional[str] = typer.Option(None, "--gen", "-g", help="Generator spec"),
    weight: Optional[str] = typer.Option(None, "--weight", "-w", help="Weight spec; the minimal shadow weight when omitted"),
    c: float = typer.Option(DEFAULT_SHADOW_C, "--c", help="Shadow arc constant"),
):
    """🛡️ Does P[w] dominate φ_Λ on the sequence?"""
    try:
        run = _run_config(ctx, "majorant-check", gen=gen, weight=weight)
        seq = build_sequence(run.gen)
        analyzer = InterpolationAnalyzer(seq, parallelism=run.parallelism)
        if run.weight:
            report = analyzer.majorant_check(weight_from_spec(run.weight, seq))
        else:
            report = analyzer.shadow_majorant_check(c)
        analyzer.display_report(report)
        paths = _writer(run, c=c).write_report(report, _stem(run))
    except Exception as e:
        _abort(e)
    _finish(run, paths, report.verdicts)


@app.command("condition-d")
def condition_d(
    ctx: typer.Context,
    gen: Optional[str] = typer.Option(None, "--gen", "-g", help="Generator spec"),
    shape: Optional[str] = typer.Option(None, "--shape", "-s", help="Shape spec"),
    budget: int = typer.Option(120, "--budget", help="Norm evaluations to spend"),
    max_support: int = typer.Option(48, "--max-support", help="Candidate atoms"),
    nevanlinna: bool = typer.Option(False, "--nevanlinna", help="Pair with L∞ instead of the Orlicz dual"),
    grid_base: Optional[int] = typer.Option(None, "--grid-base", help="Uniform boundary nodes"),
):
    """🔎 Search for a large dual-condition ratio"""
    try:
        run = _run_config(ctx, "condition-d", gen=gen, shape=shape or ("identity" if nevanlinna else None), grid_base=grid_base)
        seq = build_sequence(run.gen)
        phi = shape_from_spec(run.shape)
        analyzer = InterpolationAnalyzer(seq, parallelism=run.parallelism)
        searcher = DualSearcher(
            seq,
            phi,
            norm="sup" if nevanlinna else "orlicz",
            phi=analyzer.phi,
            max_support=max_support,
            grid_base=run.grid_base,
            grid_density=run.grid_density,
        )
        state = searcher.search(budget)
        searcher.display_state(state)
        writer = _writer(run, budget=budget, max_support=max_support, nevanlinna=nevanlinna)
        paths = writer.write_frame(state.trace_frame(), f"{_stem(run)}_trace")
        paths += writer.write_json(state.to_dict(), _stem(run))
    except Exception as e:
        _abort(e)
    _finish(run, paths)


@app.command()
def hoffman(
    ctx: typer.Context,
    gen: Optional[str] = typer.Option(None, "--gen", "-g", help="Generator spec"),
    delta: Optional[float] = typer.Option(None, "--delta", help="Separation; the sequence's own when omitted"),
    per_side: int = typer.Option(4, "--per-side", help="Grid samples per square side"),
):
    """✂️ Split into two halves and verify the comparison of their products"""
    try:
        run = _run_config(ctx, "hoffman", gen=gen)
        seq = build_sequence(run.gen)
        if delta is None:
            delta = separation_constant(seq) if len(seq) > 1 else 1.0
        split = hoffman_split(seq, delta)
        fit = hoffman_verify(seq, split, delta, per_side=per_side)
        display_fit(fit)
        first = {complex(z) for z in split[0].complex_points}
        frame = seq.to_frame()
        frame["part"] = [1 if complex(z) in first else 2 for z in seq.complex_points]
        writer = _writer(run, delta=delta, per_side=per_side)
        paths = writer.write_frame(frame, f"{_stem(run)}_split")
        paths += writer.write_json(fit.to_dict(), _stem(run))
    except Exception as e:
        _abort(e)
    _finish(run, paths)


@app.command("section6-report")
def section6_report_command(
    ctx: typer.Context,
    epsilon: Optional[float] = typer.Option(None, "--epsilon", "-e", help="Growth exponent ε"),
    n: Optional[str] = typer.Option(None, "--n", help="Stages, e.g. 8..14"),
    j_offset: Optional[int] = typer.Option(None, "--j-offset", help="Exact stages beyond n"),
    family: str = typer.Option("psi", "--family", help="Stage family: psi or loglog"),
    shadow_terms: int = typer.Option(10 ** 6, "--shadow-terms", help="Exact terms of the shadow series"),
):
    """📊 Growth, incompatibility and shadow report for the staged sequence"""
    try:
        run = _run_config(
            ctx,
            "section6-report",
            epsilon=epsilon,
            n_range=parse_range(n, "n_range") if n is not None else None,
            j_offset=j_offset,
        )
        eps = run.epsilon if run.epsilon is not None else 1.0
        n_range = run.n_range or list(range(8, 15))
        J_offset = run.j_offset if run.j_offset is not None else 16
        report = section6_report(
            eps,
            n_range,
            J_offset,
            family=family,
            parallelism=run.parallelism,
            strict=run.strict,
            shadow_terms=shadow_terms,
        )
        display_section6(report)
        paths = _writer(run, family=family, shadow_terms=shadow_terms).write_report(report, _stem(run))
    except Exception as e:
        _abort(e)
    _finish(run, paths, report.verdicts)


@app.command()
def shadow(
    ctx: typer.Context,
    gen: Optional[str] = typer.Option(None, "--gen", "-g", help="Generator spec"),
    shape: Optional[str] = typer.Option(None, "--shape", "-s", help="Shape for the membership test"),
    c: float = typer.Option(DEFAULT_SHADOW_C, "--c", help="Shadow arc constant"),
    terms: int = typer.Option(10 ** 6, "--terms", help="Exact terms of the membership series"),
):
    """🌘 Shadow weight of a sequence and its Orlicz-class membership"""
    try:
        run = _run_config(ctx, "shadow", gen=gen, shape=shape)
        seq = build_sequence(run.gen)
        analyzer = InterpolationAnalyzer(seq, parallelism=run.parallelism)
        c0 = analyzer.minimal_shadow_constant(c)
        if not math.isfinite(c0):
            raise ValueError("no shadow constant majorizes φ_Λ (some point lies outside every shadow arc)")
        w = shadow_weight(seq, c0 if c0 > 0.0 else 1.0, c)
        result = {"c0": c0, "c": c, "total_mass": w.total_mass, "arcs": len(w.arcs())}
        verdicts = {}
        if seq.stages is not None and seq.stages.size:
            stages = sorted({int(s) for s in seq.stages})
            result["touch_constants"] = {str(s): shadow_touch_constant(s) for s in stages}
        if run.shape:
            phi = shape_from_spec(run.shape)
            if seq.generator == Section6Generator.tag:
                params = seq.params
                source = Section6Generator(params["epsilon"], params["N_max"], params.get("family", "psi"))
                membership = weight_class_check(source, phi, K=terms)
            else:
                membership = weight_class_check(w, phi)
            result["membership"] = membership.to_dict()
            verdicts["membership"] = membership.verdict
        console.print(Panel.fit(
            f"[bold]Minimal c₀:[/bold] {c0:.10g}\n"
            f"[bold]Arcs:[/bold] {result['arcs']}    [bold]Mass:[/bold] {w.total_mass:.6g}\n"
            + (f"[bold]Membership:[/bold] [cyan]{verdicts['membership']}[/cyan]" if verdicts else "[dim]no shape given[/dim]"),
            title="🌘 Shadow weight",
        ))
        writer = _writer(run, c=c, terms=terms)
        paths = writer.write_frame(w.to_frame(), f"{_stem(run)}_weight")
        paths += writer.write_json(result, _stem(run))
    except Exception as e:
        _abort(e)
    _finish(run, paths, verdicts)


@app.command()
def probe(
    ctx: typer.Context,
    shape: Optional[str] = typer.Option(None, "--shape", "-s", help="Shape spec"),
    t_min: Optional[float] = typer.Option(None, "--t-min", help="Probe range start"),
    t_max: Optional[float] = typer.Option(None, "--t-max", help="Probe range end"),
):
    """🧪 Probe Δ₂, ∇₂ and the shift condition for a shape"""
    try:
        run = _run_config(ctx, "probe", shape=shape)
        phi = shape_from_spec(run.shape)
        if (t_min is None) != (t_max is None):
            raise ConfigError("t_range", "give both --t-min and --t-max or neither")
        t_range = (t_min, t_max) if t_min is not None else None
        probes = [delta2_probe(phi, t_range), nabla2_probe(phi, t_range), tilde_delta2_probe(phi, t_range)]
        table = Table(title=f"Growth conditions of {phi.describe()}")
        table.add_column("condition", style="cyan")
        table.add_column("holds", justify="center")
        table.add_column("constants")
        table.add_column("witness", justify="right")
        for p in probes:
            constants = ", ".join(f"{k}={v:.6g}" for k, v in p.constants.items())
            witness = f"{p.witness:.6g}" if p.witness is not None else "-"
            table.add_row(p.condition, "✅" if p.holds else "❌", constants, witness)
        console.print(table)
        result = {p.condition: p.to_dict() for p in probes}
        result["strongly_convex"] = is_strongly_convex(phi, t_range)
        paths = _writer(run, t_min=t_min, t_max=t_max).write_json(result, _stem(run))
    except Exception as e:
        _abort(e)
    _finish(run, paths)


@app.command()
def squares(
    ctx: typer.Context,
    gen: Optional[str] = typer.Option(None, "--gen", "-g", help="Generator spec"),
):
    """🧱 Dyadic squares occupied by a sequence, with colors and minimizers"""
    try:
        run = _run_config(ctx, "squares", gen=gen)
        seq = build_sequence(run.gen)
        groups = occupied_squares(seq)
        indices = sorted(groups)
        frame = squares_frame(indices)
        frame["points"] = [len(groups[i]) for i in indices]

        phi = phi_all(seq, parallelism=run.parallelism)
        minimizers = {}
        for part in split4(seq):
            for m in per_square_minimizer(part, seq, phi=phi):
                minimizers[m.square.index] = m
        frame["minimizer_index"] = [minimizers[i].index for i in indices]
        frame["m"] = [minimizers[i].m for i in indices]

        table = Table(title=f"Dyadic squares of {seq.generator}")
        for name in ("class", "squares", "points"):
            table.add_column(name, justify="right")
        for color in range(1, 5):
            members = [i for i in indices if color_class(i) == color]
            table.add_row(str(color), str(len(members)), str(sum(len(groups[i]) for i in members)))
        console.print(table)
        paths = _writer(run).write_frame(frame, _stem(run))
    except Exception as e:
        _abort(e)
    _finish(run, paths)


if __name__ == "__main__":
    app()

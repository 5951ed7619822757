"""
Command-line front end for quantum random walks on finite-dimensional bialgebras.
Validates fixtures, evaluates Markov semigroups and walks, and runs the
walk-vs-Lévy convergence and block-bound experiments described by a TOML config.
"""

from pathlib import Path
from typing import List, Optional, Sequence

import numpy as np
import typer
from rich.console import Console
from rich.table import Table

from config.settings import settings
from core.algebra import BialgebraError, StateCertificationError, validate_bialgebra
from core.builders import FixtureValidationError, resolve_fixture
from core.experiment import ResolvedExperiment, resolve_experiment
from core.fock import FockError
from core.harness import HarnessError, NoiseFloorError, block_error_sweep, fit_order, sweep
from core.schurmann import RepresentationError, SchurmannError, markov_semigroup
from core.walk import WalkError, beta_direct, beta_gns, walk_dense, walk_vacuum_sequence
from data.experiment import ConfigError, load_experiment
from data.models import FitEntry, SweepRecord, ValidationReport
from utils.logger import setup_logger
from utils.report_exporter import ReportExportError, ReportFormat, emit_report

logger = setup_logger(__name__)
console = Console()
app = typer.Typer(
    help="Quantum random walks and their Lévy-process limits on finite bialgebras.",
    add_completion=False,
    no_args_is_help=True,
)

EXIT_FAILED = 1
EXIT_CONFIG = 2


def _fail(message: str, code: int) -> typer.Exit:
    console.print(f"[bold red]✗ {message}[/bold red]")
    return typer.Exit(code=code)


def _load(config_path: Path) -> ResolvedExperiment:
    """Load and resolve a config; every failure becomes a typer.Exit with the right code."""
    try:
        config = load_experiment(config_path)
        return resolve_experiment(config, base_dir=config_path.parent)
    except FixtureValidationError as e:
        raise _fail(f"Fixture validation failed: {e}", EXIT_FAILED)
    except RepresentationError as e:
        raise _fail(f"Triple rejected: {e}", EXIT_FAILED)
    except (ConfigError, BialgebraError, SchurmannError, FockError, KeyError, ValueError) as e:
        raise _fail(f"Config error: {e}", EXIT_CONFIG)


def _effective(flag, field: str, config_value):
    """CLI flag > QLW_* environment > config file > settings default."""
    if flag is not None:
        return flag
    if field in settings.model_fields_set:
        return getattr(settings, field)
    if config_value is not None:
        return config_value
    return getattr(settings, field)


def _fmt_complex(z: complex) -> str:
    return f"{z.real:.12g}" if abs(z.imag) < 1e-15 else f"{z.real:.12g}{z.imag:+.12g}i"


def display_validation(report: ValidationReport) -> None:
    table = Table(title=f"🔍 Bialgebra axioms: {report.name} (dim {report.dim})")
    table.add_column("Axiom", style="cyan", no_wrap=True)
    table.add_column("Residual", justify="right")
    table.add_column("Status", justify="center")
    for r in report.residuals:
        status = "[green]✓[/green]" if r.passed else "[bold red]✗[/bold red]"
        table.add_row(r.axiom.display_name(), f"{r.residual:.3e}", status)
    console.print(table)


@app.command()
def validate(
    fixture: str = typer.Argument(..., help="Fixture JSON path or builtin 'group:<G>' / 'function:<G>'"),
    tol: Optional[float] = typer.Option(None, "--tol", help="Residual tolerance (default: QLW_AXIOM_TOL)"),
):
    """
    Check every bialgebra axiom of a fixture and print the residual table.
    Exits 0 iff all residuals are within tolerance.
    """
    try:
        algebra = resolve_fixture(fixture, tol=tol)
        report = validate_bialgebra(algebra, tol=tol, name=fixture)
    except FixtureValidationError as e:
        report = e.report
    except BialgebraError as e:
        raise _fail(f"Cannot load fixture: {e}", EXIT_CONFIG)

    display_validation(report)
    if not report.passed:
        failing = ", ".join(a.value for a in report.failing())
        raise _fail(f"Axioms failing: {failing}", EXIT_FAILED)
    console.print(f"\n[bold green]✓ {fixture} is a valid *-bialgebra[/bold green]")


@app.command()
def semigroup(
    config_path: Path = typer.Argument(..., metavar="CONFIG", help="Experiment TOML file"),
    t: str = typer.Option("1.0", "--t", help="Comma-separated times, e.g. 0.5,1,2"),
):
    """Print P_t(a) = exp_*(t gamma)(a) for each configured observable."""
    experiment = _load(config_path)
    try:
        times = [float(part) for part in t.split(",") if part.strip()]
    except ValueError:
        raise _fail(f"Invalid --t list: {t!r}", EXIT_CONFIG)
    if not times or any(value < 0 for value in times):
        raise _fail("--t needs at least one non-negative time", EXIT_CONFIG)

    observables = experiment.observables()
    table = Table(title=f"📈 Markov semigroup P_t ({experiment.triple.name or 'triple'})")
    table.add_column("t", justify="right", style="cyan")
    for label, _ in observables:
        table.add_column(label, justify="right")

    for time in times:
        try:
            state = markov_semigroup(experiment.algebra, experiment.triple, time)
        except StateCertificationError as e:
            raise _fail(str(e), EXIT_FAILED)
        table.add_row(f"{time:g}", *(_fmt_complex(state(a)) for _, a in observables))
    console.print(table)


@app.command()
def walk(
    config_path: Path = typer.Argument(..., metavar="CONFIG", help="Experiment TOML file"),
    gns: bool = typer.Option(False, "--gns", help="Build beta^(h) by the GNS construction"),
    cap: Optional[int] = typer.Option(None, "--cap", help="Dense cross-check cap on (1 + dim k)^n"),
):
    """
    Print the vacuum state sequence kappa_m of the walk at step h.
    When (1 + dim k)^n is within the cap, kappa_n is cross-checked against the dense J_n.
    """
    experiment = _load(config_path)
    spec = experiment.config.walk
    if spec is None:
        raise _fail("Config has no [walk] section (h, n)", EXIT_CONFIG)
    cap = _effective(cap, "dense_cap", experiment.config.dense_cap)
    algebra, triple = experiment.algebra, experiment.triple

    try:
        beta = (beta_gns if gns else beta_direct)(algebra, triple, spec.h)
    except WalkError as e:
        raise _fail(str(e), EXIT_CONFIG)
    kappas = walk_vacuum_sequence(algebra, beta, spec.n)

    observables = experiment.observables()
    table = Table(title=f"🚶 Walk states kappa_m at h = {spec.h:g}")
    table.add_column("m", justify="right", style="cyan")
    for label, _ in observables:
        table.add_column(label, justify="right")
    steps = sorted(set(range(0, spec.n + 1, spec.every)) | {spec.n})
    for m in steps:
        table.add_row(str(m), *(_fmt_complex(kappas[m](a)) for _, a in observables))
    console.print(table)

    if beta.size ** spec.n <= cap:
        dense = walk_dense(algebra, beta, spec.n, cap)
        deviation = float(np.max(np.abs(dense[:, 0, 0] - kappas[-1].coeffs)))
        console.print(f"Dense cross-check of kappa_{spec.n}: max deviation {deviation:.3e}")
        if deviation > 1e-10:
            raise _fail("Fast and dense walk disagree", EXIT_FAILED)


def _output_path(
    output: Optional[Path], experiment: ResolvedExperiment, case_name: str, fmt: ReportFormat
) -> Path:
    config = experiment.config
    base = output if output is not None else config.output.path
    multiple = len(experiment.cases) > 1
    if base is None:
        return settings.report_output_dir / f"{config.name}_{case_name}.{fmt.value}"
    base = Path(base)
    return base.with_name(f"{base.stem}_{case_name}{base.suffix}") if multiple else base


def display_sweep(case_name: str, records: Sequence[SweepRecord], fit: FitEntry) -> None:
    table = Table(title=f"📉 Walk vs Lévy oracle: {case_name}")
    table.add_column("h", justify="right", style="cyan")
    table.add_column("n", justify="right")
    table.add_column("walk", justify="right")
    table.add_column("oracle", justify="right")
    table.add_column("|error|", justify="right", style="yellow")
    for r in records:
        if r.ok:
            table.add_row(
                f"{r.h:.6g}", str(r.n), _fmt_complex(r.walk_value), _fmt_complex(r.oracle_value),
                f"{r.abs_error:.3e}",
            )
        else:
            table.add_row(f"{r.h:.6g}", str(r.n), "-", "-", f"[red]{r.error}[/red]")
    console.print(table)
    if fit.exact_zero:
        console.print("Observed order: errors below the noise floor (exact)")
    elif fit.fit is not None:
        console.print(f"Observed order: slope {fit.fit.slope:.4f}, r² {fit.fit.r_squared:.4f}")


def _fit_entry(label: str, points) -> FitEntry:
    try:
        return FitEntry(label=label, fit=fit_order(points))
    except NoiseFloorError:
        return FitEntry(label=label, exact_zero=True)


@app.command()
def converge(
    config_path: Path = typer.Argument(..., metavar="CONFIG", help="Experiment TOML file"),
    output: Optional[Path] = typer.Option(None, "--output", "-o", help="Report path (default: config or reports/)"),
    fmt: Optional[ReportFormat] = typer.Option(None, "--format", "-f", help="csv or json"),
    jobs: Optional[int] = typer.Option(None, "--jobs", "-j", min=1, help="Parallel sweep entries"),
    seed: Optional[int] = typer.Option(None, "--seed", help="Seed recorded in the report"),
):
    """Sweep every test case over the h grid, fit the observed order and write the reports."""
    experiment = _load(config_path)
    config = experiment.config
    if not experiment.cases:
        raise _fail("Config has no [[testcases]]", EXIT_CONFIG)
    fmt = fmt if fmt is not None else ReportFormat(config.output.format)
    jobs = jobs if jobs is not None else config.jobs
    seed = _effective(seed, "seed", config.seed)
    h_grid = experiment.h_grid()

    console.print(
        f"[blue]🔍 {config.name}: {len(experiment.cases)} case(s), "
        f"h from {h_grid[0]:.6g} to {h_grid[-1]:.6g}[/blue]"
    )
    try:
        for case in experiment.cases:
            records = sweep(experiment.algebra, experiment.triple, case, h_grid, jobs=jobs)
            fit = _fit_entry(case.name, records)
            display_sweep(case.name, records, fit)
            path = _output_path(output, experiment, case.name, fmt)
            emit_report(
                records, [fit], fmt, path,
                fixture=config.fixture, triple=config.triple.describe(),
                testcase=case.name, seed=seed,
            )
            console.print(f"[bold green]✓ Report written to {path}[/bold green]")
    except HarnessError as e:
        raise _fail(str(e), EXIT_CONFIG)
    except ReportExportError as e:
        raise _fail(f"Failed to write report: {e}", EXIT_CONFIG)


@app.command("beta-bounds")
def beta_bounds(
    config_path: Path = typer.Argument(..., metavar="CONFIG", help="Experiment TOML file"),
    seed: Optional[int] = typer.Option(None, "--seed", help="Seed of the norm-estimate samples"),
    output: Optional[Path] = typer.Option(None, "--output", "-o", help="Optional JSON report of the fits"),
):
    """
    Measure the block deviations of beta^(h) over the h grid and fit their orders.
    Exits 0 iff e1 vanishes and the e3 / e4 slopes are within the configured bounds.
    """
    experiment = _load(config_path)
    config = experiment.config
    bounds = config.bounds
    seed = _effective(seed, "seed", config.seed)
    h_grid = experiment.h_grid()

    try:
        errors = block_error_sweep(
            experiment.algebra, experiment.triple, h_grid, samples=config.samples, seed=seed
        )
    except (WalkError, HarnessError) as e:
        raise _fail(str(e), EXIT_CONFIG)

    fits = [
        _fit_entry(label, [(h, getattr(e, label)) for h, e in zip(h_grid, errors)])
        for label in ("e1", "e3", "e4")
    ]
    expected = {"e1": None, "e3": bounds.e3_slope, "e4": bounds.e4_slope}

    table = Table(title=f"📐 beta^(h) block deviations ({experiment.triple.name or 'triple'})")
    table.add_column("Block", style="cyan")
    table.add_column("Slope", justify="right")
    table.add_column("r²", justify="right")
    table.add_column("Expected", justify="right")
    table.add_column("Status", justify="center")
    violations: List[str] = []
    for entry in fits:
        target = expected[entry.label]
        if entry.exact_zero:
            ok = target is None
            table.add_row(entry.label, "exact 0", "-", "exact 0" if target is None else f"{target:g}",
                          "[green]✓[/green]" if ok else "[bold red]✗[/bold red]")
            if not ok:
                violations.append(f"{entry.label}: all errors below the noise floor, expected slope {target:g}")
            continue
        fit = entry.fit
        if target is None:
            ok = False
            violations.append(f"{entry.label}: expected identically 0, fitted slope {fit.slope:.4f}")
        else:
            ok = abs(fit.slope - target) <= bounds.slope_tol and fit.r_squared >= bounds.min_r_squared
            if not ok:
                violations.append(
                    f"{entry.label}: slope {fit.slope:.4f} (r² {fit.r_squared:.4f}) outside "
                    f"{target:g} ± {bounds.slope_tol:g} / r² ≥ {bounds.min_r_squared:g}"
                )
        table.add_row(
            entry.label, f"{fit.slope:.4f}", f"{fit.r_squared:.4f}",
            "exact 0" if target is None else f"{target:g} ± {bounds.slope_tol:g}",
            "[green]✓[/green]" if ok else "[bold red]✗[/bold red]",
        )
    console.print(table)

    if output is not None:
        try:
            emit_report(
                [], fits, ReportFormat.JSON, output,
                fixture=config.fixture, triple=config.triple.describe(),
                testcase="beta-bounds", seed=seed,
            )
        except ReportExportError as e:
            raise _fail(f"Failed to write report: {e}", EXIT_CONFIG)

    if violations:
        raise _fail("Bound violated: " + "; ".join(violations), EXIT_FAILED)
    console.print("\n[bold green]✓ Block deviations within bounds[/bold green]")


def run(argv: Optional[Sequence[str]] = None) -> int:
    """
    Run the CLI on an argument list and return the exit code.
    Usage errors exit 2 and aborts exit 1, as typer's own entry point does.
    """
    command = typer.main.get_command(app)
    try:
        command.main(
            args=list(argv) if argv is not None else None, prog_name="qlw", standalone_mode=True
        )
    except SystemExit as e:
        if e.code is None:
            return 0
        return e.code if isinstance(e.code, int) else EXIT_FAILED
    return 0


if __name__ == "__main__":
    app()

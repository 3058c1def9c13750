"""
Command Line
============
click front end over the services:

    modspace norm FIELD_FILE          modulation norm (+ per-box breakdown)
    modspace decompose FIELD_FILE     box decomposition, one field file per box
    modspace evolve FIELD_FILE        nonlinear (or --linear) evolution
    modspace classify                 well/ill-posedness verdict
    modspace sweep                    phase diagram over (s, 1/q)
    modspace probe KIND               inflation | smoothing | product | isomorphism | decay

Without --out the machine document (JSON report or CSV) goes to stdout.
With --out DIR the CSV, report and field files are written there and a
summary table is printed. Every failure ends with one stderr line
``modspace-error[<code>]: <detail>`` and a nonzero exit code.
"""

import csv
import io
import json
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import click
from pydantic import BaseModel
from rich.console import Console
from rich.table import Table

from core.config import get_settings
from core.error_handler import Diagnostic, handle_error
from core.exceptions import ValidationError
from core.logger import set_log_level
from core.metrics import Stopwatch, get_metrics_collector
from schemas.configs import (
    DecayConfig,
    EvolveConfig,
    InflationConfig,
    IsomorphismConfig,
    ModulationParams,
    ProductConfig,
    SmoothingConfig,
    SweepConfig,
)
from schemas.reports import (
    BoxNorm,
    DecomposeReport,
    EvolveReport,
    NormReport,
    ProbeReport,
    RunManifest,
    SweepReport,
)
from services.cache_service import ProbeCache
from services.classifier import classify
from services.field_file_service import file_digest, get_field_file_service
from services.modulation import decompose, modulation_norm_report
from services.probes import (
    ProbeRunner,
    decay_probe,
    inflation_probe,
    isomorphism_probe,
    product_probe,
    smoothing_probe,
)
from services.propagator import make_propagator, multiplier_table
from services.solver import solve
from services.sweep_service import run_sweep
from services.windows import WINDOW_KINDS, check_k_max

console = Console()

EQUATION_ALIASES = {"heat": "fractional-heat", "kg": "klein-gordon", "iwabuchi": "heat-iwabuchi"}


@dataclass
class CliState:
    seed: int
    threads: int
    out: Optional[Path]
    fmt: str
    timings: bool
    cache: bool


# === Parameter parsing ===

def _list_parser(kind: Callable[[str], Any]):
    """Comma-separated values; integers also accept ranges a..b."""

    def parse(ctx, param, value):
        if value is None or isinstance(value, list):
            return value
        items: List[Any] = []
        for token in str(value).split(","):
            token = token.strip()
            if not token:
                continue
            if ".." in token and kind is int:
                low, high = token.split("..", 1)
                items.extend(range(int(low), int(high) + 1))
            else:
                try:
                    items.append(kind(token))
                except ValueError:
                    raise click.BadParameter(f"cannot parse '{token}'")
        return items

    return parse


def _options(**values: Any) -> Dict[str, Any]:
    """Drop unset flags so config defaults apply."""
    return {key: value for key, value in values.items() if value is not None}


def _load_config_document(path: str) -> Dict[str, Any]:
    try:
        payload = json.loads(Path(path).read_text(encoding="utf-8"))
    except FileNotFoundError:
        raise ValidationError("config", f"config file '{path}' does not exist")
    except json.JSONDecodeError as e:
        raise ValidationError("config", f"config file '{path}' is not valid JSON ({e})")
    if not isinstance(payload, dict):
        raise ValidationError("config", "config document must be a JSON object")
    return _normalize_keys(payload)


def _normalize_keys(document: Dict[str, Any]) -> Dict[str, Any]:
    """Flag names (time-nodes) and parameter names (time_nodes) are both accepted."""
    out = {}
    for key, value in document.items():
        name = key.lstrip("-")
        if isinstance(value, dict):
            out[name] = _normalize_keys(value)
        elif isinstance(value, list):
            out[name.replace("-", "_")] = ",".join(str(item) for item in value)
        else:
            out[name.replace("-", "_")] = value
    return out


# === Output ===

def _manifest(command: str, config: Dict[str, Any], state: CliState, runtime: float,
              inputs: Sequence[str] = (), outputs: Sequence[str] = ()) -> RunManifest:
    return RunManifest(
        command=command,
        config=config,
        seed=state.seed,
        version=get_settings().APP_VERSION,
        runtime=runtime if state.timings else None,
        operations=get_metrics_collector().get_stats() if state.timings else None,
        inputs={str(path): file_digest(path) for path in inputs},
        outputs={str(path): file_digest(path) for path in outputs},
    )


def _csv_text(header: Sequence[str], rows: Sequence[Sequence[Any]]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([repr(v) if isinstance(v, float) else v for v in row])
    return buffer.getvalue()


def _emit(
    name: str,
    state: CliState,
    build: Callable[[List[str]], BaseModel],
    header: Sequence[str],
    rows: Sequence[Sequence[Any]],
    extra_outputs: Sequence[str] = (),
    summary: Optional[Callable[[], None]] = None,
) -> None:
    """
    Write or print the command output. `build(outputs)` returns the report
    with its manifest for the given list of written files.
    """
    if state.out is None:
        if state.fmt == "csv":
            click.echo(_csv_text(header, rows), nl=False)
        else:
            click.echo(build(list(extra_outputs)).model_dump_json(indent=2))
        return

    state.out.mkdir(parents=True, exist_ok=True)
    csv_path = state.out / f"{name}.csv"
    csv_path.write_text(_csv_text(header, rows), encoding="utf-8")
    report_path = state.out / f"{name}.json"
    report = build(list(extra_outputs) + [str(csv_path)])
    report_path.write_text(report.model_dump_json(indent=2), encoding="utf-8")
    if summary is not None:
        summary()
    console.print(f"[dim]wrote {report_path} and {csv_path}[/]")


def _probe_rows(report: ProbeReport) -> Tuple[List[str], List[List[Any]]]:
    keys: List[str] = []
    for point in report.points:
        for key in point.measurements:
            if key not in keys:
                keys.append(key)
    header = ["parameter", "value"] + keys
    rows = [[p.parameter, p.value] + [p.measurements.get(k, float("nan")) for k in keys] for p in report.points]
    return header, rows


def _probe_summary(report: ProbeReport) -> Callable[[], None]:
    def show() -> None:
        table = Table(title=f"probe {report.probe}: {report.verdict}")
        table.add_column("check", style="cyan")
        table.add_column("fitted")
        table.add_column("predicted")
        table.add_column("tolerance")
        table.add_column("ok")
        for check in report.checks:
            table.add_row(
                check.name,
                f"{check.fitted:.4f} ± {check.stderr:.2g}",
                f"{check.predicted:.4f}",
                f"{check.tolerance:g}",
                "yes" if check.consistent else "[red]no[/]",
            )
        console.print(table)

    return show


# === Group ===

class ModspaceGroup(click.Group):
    """Routes every failure to a single diagnostic line and exit code."""

    def main(self, *args, **kwargs):
        kwargs["standalone_mode"] = False
        try:
            result = super().main(*args, **kwargs)
        except click.exceptions.Abort:
            click.echo(Diagnostic(1, "aborted", "aborted by user").line, err=True)
            sys.exit(1)
        except click.UsageError as e:
            if e.ctx is not None:
                click.echo(e.ctx.get_usage(), err=True)
            click.echo(Diagnostic(2, "usage", e.format_message()).line, err=True)
            sys.exit(2)
        except click.ClickException as e:
            click.echo(Diagnostic(e.exit_code or 1, "usage", e.format_message()).line, err=True)
            sys.exit(e.exit_code or 1)
        except Exception as e:
            diagnostic = handle_error(e)
            click.echo(diagnostic.line, err=True)
            sys.exit(diagnostic.exit_code)
        sys.exit(result if isinstance(result, int) else 0)


@click.group(cls=ModspaceGroup)
@click.version_option(version=get_settings().APP_VERSION, prog_name="modspace")
@click.option("--seed", type=int, default=None, help="Seed for ensemble probes")
@click.option("--threads", type=int, default=None, help="Worker threads for probe points")
@click.option("--out", type=click.Path(file_okay=False), default=None, help="Output directory")
@click.option("--format", "fmt", type=click.Choice(["csv", "report"]), default=None, help="stdout document kind")
@click.option("--config", "config_file", type=str, default=None, help="JSON document overriding flag defaults")
@click.option("--timings/--no-timings", default=None, help="Embed wall-clock runtimes")
@click.option("--cache/--no-cache", default=None, help="Memoize probe points on disk")
@click.option("-v", "--verbose", count=True, help="-v info, -vv debug logging")
@click.pass_context
def cli(ctx, seed, threads, out, fmt, config_file, timings, cache, verbose):
    """Modulation-space norms, propagators, solvers and critical-exponent probes."""
    settings = get_settings()
    document: Dict[str, Any] = {}
    if config_file:
        document = _load_config_document(config_file)
        ctx.default_map = {k: v for k, v in document.items() if isinstance(v, dict)}

    def pick(value, key, default):
        if value is not None:
            return value
        return document.get(key, default)

    get_metrics_collector().clear()
    if verbose:
        set_log_level("DEBUG" if verbose > 1 else "INFO")
    out = pick(out, "out", None)
    ctx.obj = CliState(
        seed=int(pick(seed, "seed", settings.SEED)),
        threads=int(pick(threads, "threads", settings.THREADS)),
        out=Path(out) if out else None,
        fmt=pick(fmt, "format", "report"),
        timings=bool(pick(timings, "timings", settings.REPORT_TIMINGS)),
        cache=bool(pick(cache, "cache", settings.CACHE_ENABLED)),
    )


def _runner(state: CliState) -> ProbeRunner:
    cache = ProbeCache() if state.cache else None
    return ProbeRunner(threads=state.threads, cache=cache)


window_option = click.option("--window", type=click.Choice(WINDOW_KINDS), default=None)
k_max_option = click.option("--k-max", "k_max", type=int, default=None, help="Active box radius")


# === norm / decompose ===

@cli.command()
@click.argument("field_file", type=str)
@click.option("--s", type=float, default=0.0)
@click.option("--p", type=float, default=2.0)
@click.option("--q", type=float, default=2.0)
@window_option
@k_max_option
@click.option("--breakdown", is_flag=True, default=False, help="Per-box table")
@click.pass_obj
def norm(state: CliState, field_file, s, p, q, window, k_max, breakdown):
    """‖f‖_{M^s_{p,q}} of a field file."""
    with Stopwatch("cli.norm") as watch:
        field = get_field_file_service().load(field_file)
        params = ModulationParams(s=s, p=p, q=q, n=field.grid.n)
        window = window or get_settings().WINDOW
        result = modulation_norm_report(field, params, window, k_max)

    boxes = [BoxNorm(k=list(e.k), box_norm=e.box_norm, weighted=e.weighted) for e in result.boxes]
    config = {"field_file": field_file, "s": s, "p": p, "q": q, "window": window,
              "k_max": result.k_max, "breakdown": breakdown}

    def build(outputs):
        return NormReport(
            value=result.value, s=s, p=p, q=q, window=window, k_max=result.k_max,
            tail_mass=result.tail_mass, breakdown=boxes if breakdown else None,
            manifest=_manifest("norm", config, state, watch.seconds, [field_file], outputs),
        )

    if breakdown:
        header = ["k", "box_norm", "weighted"]
        rows = [[" ".join(str(c) for c in b.k), b.box_norm, b.weighted] for b in boxes]
    else:
        header, rows = ["s", "p", "q", "value"], [[s, p, q, result.value]]

    def show():
        console.print(f"‖f‖ = [bold]{result.value:.12g}[/] (tail {result.tail_mass:.3g})")

    _emit("norm", state, build, header, rows, summary=show)


@cli.command(name="decompose")
@click.argument("field_file", type=str)
@window_option
@k_max_option
@click.pass_obj
def decompose_cmd(state: CliState, field_file, window, k_max):
    """Split a field into its boxes; with --out one field file per nonzero box."""
    with Stopwatch("cli.decompose") as watch:
        field = get_field_file_service().load(field_file)
        window = window or get_settings().WINDOW
        k_max = check_k_max(field.grid, k_max)
        pieces = decompose(field, window, k_max)
        result = modulation_norm_report(field, ModulationParams(n=field.grid.n), window, k_max)
        files: Dict[str, str] = {}
        if state.out is not None:
            files = get_field_file_service().save_decomposition(pieces, state.out / "boxes")

    boxes = [BoxNorm(k=list(e.k), box_norm=e.box_norm, weighted=e.weighted) for e in result.boxes]
    config = {"field_file": field_file, "window": window, "k_max": k_max}

    def build(outputs):
        return DecomposeReport(
            window=window, k_max=k_max, boxes=boxes, files=files,
            manifest=_manifest("decompose", config, state, watch.seconds, [field_file], outputs),
        )

    rows = [[" ".join(str(c) for c in b.k), b.box_norm] for b in boxes]
    _emit("decompose", state, build, ["k", "l2_norm"], rows, extra_outputs=list(files.values()))


# === evolve ===

@cli.command()
@click.argument("field_file", type=str)
@click.option("--kind", type=click.Choice(["fractional-heat", "schrodinger", "kg-cos", "kg-sinc"]),
              default="fractional-heat")
@click.option("--alpha", type=float, default=None)
@click.option("--k", "power_k", type=int, default=None, help="Power of the nonlinearity")
@click.option("--T", "T", type=float, default=None, help="Time horizon")
@click.option("--time-nodes", type=int, default=None)
@click.option("--quad-nodes", type=int, default=None)
@click.option("--picard-tol", type=float, default=None)
@click.option("--picard-max-iter", type=int, default=None)
@click.option("--dealias-factor", type=float, default=None)
@click.option("--mode", type=click.Choice(["picard-global", "etd-step"]), default=None)
@click.option("--etd-order", type=click.IntRange(1, 2), default=None)
@click.option("--etd-substeps", type=int, default=None)
@click.option("--linear", is_flag=True, default=False, help="Propagate only, no nonlinearity")
@click.option("--norm-s", type=float, default=None)
@click.option("--norm-p", type=float, default=None)
@click.option("--norm-q", type=float, default=None)
@window_option
@k_max_option
@click.option("--blowup-factor", type=float, default=None)
@click.option("--residual/--no-residual", default=True, help="Attach the Duhamel residual")
@click.option("--dump-multiplier", is_flag=True, default=False, help="Multiplier table at T")
@click.pass_obj
def evolve(state: CliState, field_file, kind, alpha, residual, dump_multiplier, linear, **flags):
    """Solve u_t = L u + u^k (or propagate with --linear) from a field file."""
    if kind == "fractional-heat" and alpha is None:
        alpha = 1.0
    spec = make_propagator(kind, alpha)
    cfg = EvolveConfig(nonlinear=not linear, **_options(**flags))
    service = get_field_file_service()

    u0 = service.load(field_file)
    table = multiplier_table(spec, u0.grid, cfg.T) if dump_multiplier else []
    multiplier_header = [f"xi_{i + 1}" for i in range(u0.grid.n)] + ["re", "im"]
    multiplier_rows = [list(xi) + [m.real, m.imag] for xi, m in table]
    if dump_multiplier and state.out is None:
        click.echo(_csv_text(multiplier_header, multiplier_rows), nl=False)
        return

    with Stopwatch("cli.evolve") as watch:
        trajectory = solve(u0, spec, cfg, with_residual=residual)
        params = cfg.norm_params(u0.grid.n)
        norms = trajectory.norms(params, cfg.window, cfg.k_max)

    files: List[str] = []
    if state.out is not None:
        files = service.save_states(trajectory.states, trajectory.times, state.out / "states")
        if dump_multiplier:
            path = state.out / "multiplier.csv"
            path.write_text(_csv_text(multiplier_header, multiplier_rows), encoding="utf-8")
            files.append(str(path))

    diagnostics = trajectory.diagnostics
    config = {"field_file": field_file, "kind": kind, "alpha": alpha, **cfg.model_dump(mode="json")}

    def build(outputs):
        return EvolveReport(
            mode=diagnostics.mode,
            status=diagnostics.status,
            iterations=diagnostics.iterations,
            times=[float(t) for t in trajectory.times],
            norms=norms,
            final_norm=norms[-1],
            differences=diagnostics.differences,
            contraction_ratios=diagnostics.contraction_ratios,
            contraction_factor=diagnostics.contraction_factor,
            residual=diagnostics.residual,
            files=files,
            manifest=_manifest("evolve", config, state, watch.seconds, [field_file], outputs),
        )

    rows = [[float(t), value] for t, value in zip(trajectory.times, norms)]

    def show():
        console.print(
            f"{diagnostics.mode}: [bold]{diagnostics.status}[/] after {diagnostics.iterations} "
            f"iterations, final norm {norms[-1]:.12g}"
        )

    _emit("evolve", state, build, ["t", "norm"], rows, extra_outputs=files, summary=show)


# === classify / sweep ===

def _equation(value: str) -> str:
    return EQUATION_ALIASES.get(value, value)


EQUATION_CHOICES = ["fractional-heat", "schrodinger", "klein-gordon", "heat-iwabuchi"] + list(EQUATION_ALIASES)


@cli.command(name="classify")
@click.option("--equation", type=click.Choice(EQUATION_CHOICES), default="fractional-heat")
@click.option("--n", type=int, default=1)
@click.option("--k", type=int, default=2)
@click.option("--alpha", type=float, default=None)
@click.option("--s", type=float, required=True)
@click.option("--q", type=float, required=True)
@click.pass_obj
def classify_cmd(state: CliState, equation, n, k, alpha, s, q):
    """WellPosed / IllPosed / Gap for one parameter point."""
    equation = _equation(equation)
    with Stopwatch("cli.classify") as watch:
        verdict = classify(equation, n, k, s, q, alpha)
    config = {"equation": equation, "n": n, "k": k, "alpha": alpha, "s": s, "q": q}

    if state.out is None:
        if state.fmt == "csv":
            click.echo(_csv_text(["status", "rule", "sigma", "overlap", "detail"],
                                 [[verdict.status, verdict.rule, verdict.sigma, verdict.overlap, verdict.detail]]),
                       nl=False)
        else:
            click.echo(verdict.line())
        return

    state.out.mkdir(parents=True, exist_ok=True)
    path = state.out / "classify.json"
    document = {
        "verdict": verdict.model_dump(mode="json"),
        "manifest": _manifest("classify", config, state, watch.seconds).model_dump(mode="json"),
    }
    path.write_text(json.dumps(document, indent=2), encoding="utf-8")
    click.echo(verdict.line())


@cli.command()
@click.option("--equation", type=click.Choice(EQUATION_CHOICES), default=None)
@click.option("--n", type=int, default=None)
@click.option("--k", type=int, default=None)
@click.option("--alpha", type=float, default=None)
@click.option("--s-min", type=float, default=None)
@click.option("--s-max", type=float, default=None)
@click.option("--s-points", type=int, default=None, help="Resolution in s")
@click.option("--q-values", callback=_list_parser(float), default=None, help="Comma-separated q values")
@click.option("--measure", is_flag=True, default=None, help="Attach inflation exponents on a subgrid")
@click.option("--measure-stride", type=int, default=None)
@click.option("--measure-N-list", "measure_N_list", callback=_list_parser(int), default=None)
@click.pass_obj
def sweep(state: CliState, equation, **flags):
    """Phase diagram of verdicts over (s, 1/q)."""
    if equation is not None:
        flags["equation"] = _equation(equation)
    cfg = SweepConfig(**_options(**flags))
    with Stopwatch("cli.sweep") as watch:
        report = run_sweep(cfg, runner=_runner(state))

    header = ["s", "q", "inv_q", "sigma", "status", "rule", "overlap"]
    if cfg.measure:
        header += ["fitted_exponent", "predicted_exponent"]
    rows = []
    for row in report.rows:
        values = [row.s, row.q, row.inv_q, row.sigma, row.status, row.rule, row.overlap]
        if cfg.measure:
            values += ["" if row.fitted_exponent is None else row.fitted_exponent,
                       "" if row.predicted_exponent is None else row.predicted_exponent]
        rows.append(values)

    def build(outputs) -> SweepReport:
        return report.model_copy(update={
            "manifest": _manifest("sweep", cfg.model_dump(mode="json"), state, watch.seconds, outputs=outputs),
        })

    _emit("sweep", state, build, header, rows)


# === probes ===

@cli.group()
def probe():
    """Rate experiments."""


def _run_probe(name: str, state: CliState, config: BaseModel, run: Callable[[], ProbeReport]) -> None:
    with Stopwatch(f"cli.probe.{name}") as watch:
        report = run()
    report = report.model_copy(update={"runtime": watch.seconds if state.timings else None})
    header, rows = _probe_rows(report)

    def build(outputs):
        settings_config = {"probe": name, **config.model_dump(mode="json")}
        return report.model_copy(update={
            "manifest": _manifest(f"probe {name}", settings_config, state, watch.seconds, outputs=outputs),
        })

    _emit(f"probe_{name}", state, build, header, rows, summary=_probe_summary(report))


@probe.command()
@click.option("--case", type=click.Choice(["one", "two", "1", "2"]), default=None)
@click.option("--n", type=int, default=None)
@click.option("--k", type=int, default=None)
@click.option("--alpha", type=float, default=None)
@click.option("--s", type=float, default=None)
@click.option("--q", type=float, default=None)
@click.option("--N-list", "N_list", callback=_list_parser(int), default=None, help="e.g. 8,16,32,64")
@click.option("--sep", type=int, default=None)
@click.option("--quad-nodes", type=int, default=None)
@click.option("--near-center-radius", type=int, default=None)
@window_option
@click.option("--dealias-factor", type=float, default=None)
@click.option("--slope-tolerance", type=float, default=None)
@click.option("--input-tolerance", type=float, default=None)
@click.option("--exponent-tolerance", type=float, default=None)
@click.pass_obj
def inflation(state: CliState, **flags):
    """Norm inflation of the first Duhamel correction."""
    cfg = InflationConfig(**_options(**flags))
    _run_probe("inflation", state, cfg, lambda: inflation_probe(cfg, runner=_runner(state)))


@probe.command()
@click.option("--kind", type=click.Choice(["fractional-heat", "schrodinger"]), default=None)
@click.option("--alpha", type=float, default=None)
@click.option("--s1", type=float, default=None)
@click.option("--s2", type=float, default=None)
@click.option("--q", type=float, default=None)
@click.option("--n", type=int, default=None)
@click.option("--P", "P", type=int, default=None)
@click.option("--family", callback=_list_parser(int), default=None, help="e.g. 2..256 or 0,2,4")
@click.option("--t-list", callback=_list_parser(float), default=None)
@window_option
@click.option("--tolerance", type=float, default=None)
@click.pass_obj
def smoothing(state: CliState, **flags):
    """Smoothing rate of the propagator between two regularities."""
    cfg = SmoothingConfig(**_options(**flags))
    _run_probe("smoothing", state, cfg, lambda: smoothing_probe(cfg, runner=_runner(state)))


@probe.command()
@click.option("--estimate", type=click.Choice(["product", "power"]), default=None)
@click.option("--k", type=int, default=None)
@click.option("--n", type=int, default=None)
@click.option("--p", type=float, default=None)
@click.option("--s", type=float, default=None)
@click.option("--q", type=float, default=None)
@click.option("--q1", type=float, default=None)
@click.option("--q2", type=float, default=None)
@click.option("--s1", type=float, default=None)
@click.option("--s2", type=float, default=None)
@click.option("--ensemble-size", type=int, default=None)
@click.option("--bands", callback=_list_parser(int), default=None, help="e.g. 16,32,64")
@window_option
@click.option("--tolerance", type=float, default=None)
@click.pass_obj
def product(state: CliState, **flags):
    """Product and power estimate ensembles."""
    cfg = ProductConfig(**_options(**flags))
    _run_probe("product", state, cfg, lambda: product_probe(cfg, seed=state.seed, runner=_runner(state)))


@probe.command()
@click.option("--sigma", type=float, default=None)
@click.option("--s", type=float, default=None)
@click.option("--p", type=float, default=None)
@click.option("--q", type=float, default=None)
@click.option("--n", type=int, default=None)
@click.option("--N-list", "N_list", callback=_list_parser(int), default=None)
@window_option
@click.option("--tolerance", type=float, default=None)
@click.pass_obj
def isomorphism(state: CliState, **flags):
    """Bessel potential isomorphism between M^s and M^{s−σ}."""
    cfg = IsomorphismConfig(**_options(**flags))
    _run_probe("isomorphism", state, cfg, lambda: isomorphism_probe(cfg, runner=_runner(state)))


@probe.command()
@click.option("--alpha", type=float, default=None)
@click.option("--n", type=int, default=None)
@click.option("--t-list", callback=_list_parser(float), default=None)
@click.option("--k-list", callback=_list_parser(int), default=None)
@click.option("--ensemble-size", type=int, default=None)
@click.pass_obj
def decay(state: CliState, **flags):
    """Per-box decay of the fractional heat semigroup."""
    cfg = DecayConfig(**_options(**flags))
    _run_probe("decay", state, cfg, lambda: decay_probe(cfg, seed=state.seed, runner=_runner(state)))


def main() -> None:
    cli()


if __name__ == "__main__":
    main()

"""
Experiment runner behind the CLI commands.

``run(spec)`` executes one :class:`ExperimentSpec`, writes its artifacts to
a result store and returns the process exit code:

    0  success
    2  invalid configuration or unplottable data
    3  infeasible scenario (or a capacity clamped to zero)
    4  validation suite failed
    5  artifacts could not be written
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from typing import Any, Callable, Dict, List, Optional, Tuple

import numpy as np
import structlog
from pydantic import ValidationError
from rich.console import Console
from rich.table import Table

from .. import __version__
from ..analytic.capacity import (
    CapacityResult,
    baseline_outage,
    fit_scaling_exponent,
    lambda_star_siso,
    primary_capacity,
    scaling_bounds,
    transmission_capacity,
)
from ..config import get_settings
from ..enums import (
    BindingConstraint,
    Command,
    CrossPowerMode,
    OutputFormat,
    Regime,
)
from ..errors import (
    CogcapError,
    DivergenceError,
    InfeasibleError,
    ParameterError,
    PlotError,
)
from ..harness.search import IntensitySearchResult, max_intensity_search
from ..harness.validation import lemma_suite
from ..output.plots import Series, emit_plot
from ..output.results import emit_results
from ..output.storage import ResultStore, create_result_store
from ..schemas.experiment import ExperimentSpec
from ..schemas.plan import TrialPlan
from ..schemas.scenario import ScenarioConfig

logger = structlog.get_logger()
console = Console(stderr=True)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_INVALID = 2
EXIT_INFEASIBLE = 3
EXIT_VALIDATION_FAILED = 4
EXIT_IO = 5

FIG3_LAMBDA_P = np.linspace(0.0005, 0.008, 16)
FIG3_TOTAL_OUTAGE = 0.1
FIG4_DELTA_P = np.round(np.linspace(0.005, 0.2, 40), 6)
FIG5_THETAS = (1 / 2, 1 / 3, 1 / 4)


def provenance(spec: ExperimentSpec, **extra: Any) -> Dict[str, Any]:
    """Config echo, seed, trial count and tool version for artifacts."""
    data: Dict[str, Any] = {
        "tool": "cogcap",
        "version": __version__,
        "command": spec.command.value,
        "regime": spec.regime.value,
        "mode": spec.mode.value,
        "scenario": spec.scenario.model_dump(mode="json"),
        "plan": spec.plan.model_dump(mode="json"),
        "master_seed": spec.plan.master_seed,
        "trials": spec.plan.trials,
        "mc": spec.mc,
    }
    if spec.sweep is not None:
        data["sweep"] = spec.sweep.model_dump(mode="json")
    data.update(extra)
    return data


def _mc_ci(search: IntensitySearchResult) -> Tuple[Optional[float], Optional[float]]:
    """CI of the binding constraint's outage at the returned intensity."""
    evaluation = search.at_optimum
    if evaluation is None:
        return None, None
    estimate = evaluation.secondary
    if (
        search.binding_constraint == BindingConstraint.PRIMARY_OUTAGE
        and evaluation.primary is not None
    ):
        estimate = evaluation.primary
    return estimate.ci_low, estimate.ci_high


@dataclass
class RowResult:
    """One evaluated scenario."""

    row: Dict[str, Any]
    analytic: Optional[CapacityResult] = None
    search: Optional[IntensitySearchResult] = None

    @property
    def lambda_star(self) -> Optional[float]:
        if self.search is not None:
            return self.search.lambda_star_mc
        if self.analytic is not None:
            return self.analytic.lambda_star
        return None


def evaluate_scenario(
    config: ScenarioConfig,
    regime: Regime,
    plan: TrialPlan,
    mode: CrossPowerMode,
    *,
    mc: bool,
    tolerance: float,
) -> RowResult:
    """Analytic capacity (single antenna) and, when asked or required, the MC search."""
    config.dof(regime)
    started = time.perf_counter()
    analytic: Optional[CapacityResult] = None
    if regime == Regime.SISO:
        analytic = lambda_star_siso(config, mode)

    search: Optional[IntensitySearchResult] = None
    if mc or analytic is None:
        search = max_intensity_search(config, regime, plan, tolerance)

    row: Dict[str, Any] = config.effective_row()
    row["lambda_star_analytic"] = analytic.lambda_star if analytic else None
    if search is not None:
        ci_low, ci_high = _mc_ci(search)
        row.update(
            lambda_star_mc=search.lambda_star_mc,
            ci_low=ci_low,
            ci_high=ci_high,
            binding_constraint=search.binding_constraint.value,
            capacity=transmission_capacity(
                search.lambda_star_mc, config.eps_s, config.beta_s
            ),
            trials=plan.trials,
            master_seed=plan.master_seed,
        )
    elif analytic is not None:
        row.update(
            binding_constraint=analytic.binding_constraint.value,
            capacity=analytic.capacity,
        )
    if get_settings().record_wall_time:
        row["wall_time_s"] = round(time.perf_counter() - started, 3)
    return RowResult(row=row, analytic=analytic, search=search)


def _table_name(stem: str, fmt: OutputFormat) -> str:
    return f"{stem}.{fmt.value}"


def _write_rows(
    store: ResultStore, spec: ExperimentSpec, stem: str, rows: List[Dict[str, Any]]
) -> None:
    path = store.path_for(_table_name(stem, spec.format))
    emit_results(rows, spec.format, path, provenance(spec, artifact=stem))
    logger.info("results_written", path=str(path), rows=len(rows))


def _summary_table(title: str, rows: List[Dict[str, Any]], columns: List[str]) -> Table:
    table = Table(title=title, show_header=True, header_style="bold magenta")
    for column in columns:
        table.add_column(column)
    for row in rows:
        table.add_row(*[_display(row.get(column)) for column in columns])
    return table


def _display(value: Any) -> str:
    if value is None:
        return "-"
    if isinstance(value, float):
        return f"{value:.6g}"
    return str(value)


def run_capacity(spec: ExperimentSpec, store: ResultStore) -> int:
    result = evaluate_scenario(
        spec.scenario,
        spec.regime,
        spec.plan,
        spec.mode,
        mc=spec.mc,
        tolerance=spec.search_tolerance,
    )
    _write_rows(store, spec, "capacity", [result.row])
    console.print(
        _summary_table(
            "Secondary transmission capacity",
            [result.row],
            ["lambda_star_analytic", "lambda_star_mc", "binding_constraint", "capacity"],
        )
    )
    if not result.lambda_star:
        logger.warning("capacity_zero", binding=result.row.get("binding_constraint"))
        return EXIT_INFEASIBLE
    return EXIT_OK


def _coerce_axis_value(name: str, value: float) -> Any:
    annotation = ScenarioConfig.model_fields[name].annotation
    if annotation is int:
        if not float(value).is_integer():
            raise ParameterError(f"{name} takes integer values (got {value})")
        return int(value)
    return value


def run_sweep(spec: ExperimentSpec, store: ResultStore) -> int:
    assert spec.sweep is not None
    axis = spec.sweep.name
    rows: List[Dict[str, Any]] = []
    points: List[Tuple[float, float]] = []
    for value in spec.sweep.values:
        config = spec.scenario.with_updates(**{axis: _coerce_axis_value(axis, value)})
        try:
            result = evaluate_scenario(
                config,
                spec.regime,
                spec.plan,
                spec.mode,
                mc=spec.mc,
                tolerance=spec.search_tolerance,
            )
        except InfeasibleError as exc:
            logger.warning("sweep_point_infeasible", axis=axis, value=value, error=exc.message)
            rows.append(config.effective_row())
            continue
        rows.append(result.row)
        if result.lambda_star is not None:
            points.append((value, result.lambda_star))

    _write_rows(store, spec, "sweep", rows)
    if len(points) >= 2:
        emit_plot(
            [Series(label=spec.mode.value, x=[p[0] for p in points], y=[p[1] for p in points])],
            store.path_for("sweep.svg"),
            xlabel=axis,
            ylabel="lambda_star",
            title=f"lambda_star vs {axis}",
            provenance=provenance(spec, artifact="sweep"),
        )
    console.print(
        _summary_table(
            f"Sweep over {axis}",
            rows,
            [axis, "lambda_star_analytic", "lambda_star_mc", "binding_constraint"],
        )
    )
    return EXIT_OK


def run_validate(spec: ExperimentSpec, store: ResultStore) -> int:
    report = lemma_suite(spec.scenario, spec.plan)
    document = report.to_dict()
    document["provenance"] = provenance(spec)
    store.write_json("validation.json", document)

    table = Table(title="Validation suite", show_header=True, header_style="bold cyan")
    for column in ("check", "result", "statistic", "p-value"):
        table.add_column(column)
    for check in report.checks:
        table.add_row(
            check.name,
            "pass" if check.passed else "FAIL",
            _display(check.statistic),
            _display(check.p_value),
        )
    console.print(table)
    return EXIT_OK if report.passed else EXIT_VALIDATION_FAILED


def _dof_split(theta: float, size: int) -> int:
    return min(size - 1, math.ceil(theta * size - 1e-12))


def _scaled_config(
    base: ScenarioConfig, regime: Regime, variable: str, size: int, theta: float
) -> ScenarioConfig:
    if regime == Regime.MISO:
        k = _dof_split(theta, size)
        return base.with_updates(N=size, M=1, k=k, m=0)
    m = _dof_split(theta, size)
    if variable == "M":
        return base.with_updates(M=size, m=m, k=0)
    return base.with_updates(N=size, M=size, m=m, k=0)


def run_scaling(spec: ExperimentSpec, store: ResultStore) -> int:
    regime = spec.regime
    if regime not in (Regime.MISO, Regime.MIMO):
        raise ParameterError("scaling needs the miso or mimo regime")
    if regime == Regime.MISO and spec.scaling_variable == "M":
        raise ParameterError("the miso regime scales in N only")
    theta = spec.scenario.theta or 0.5
    base = spec.scenario.with_updates(theta=None)

    rows: List[Dict[str, Any]] = []
    points: List[Tuple[float, float]] = []
    for size in spec.scaling_sizes:
        config = _scaled_config(base, regime, spec.scaling_variable, size, theta)
        result = evaluate_scenario(
            config, regime, spec.plan, spec.mode, mc=True, tolerance=spec.search_tolerance
        )
        rows.append(result.row)
        points.append((float(size), float(result.lambda_star or 0.0)))

    _write_rows(store, spec, "scaling", rows)
    if any(value <= 0 for _, value in points):
        raise InfeasibleError("a scaling point has zero secondary intensity")

    slope, intercept, residual = fit_scaling_exponent(points)
    last = spec.scaling_sizes[-1]
    bound = scaling_bounds(
        regime,
        spec.scenario.alpha,
        last if spec.scaling_variable == "N" else spec.scenario.N,
        last if spec.scaling_variable == "M" or regime == Regime.MIMO else 1,
    )
    summary = {
        "variable": spec.scaling_variable,
        "sizes": spec.scaling_sizes,
        "lambda_star_mc": [value for _, value in points],
        "fitted_exponent": slope,
        "intercept": intercept,
        "residual": residual,
        "lower_exponent": bound.lower_exponent,
        "upper_exponent": bound.upper_exponent,
        "lower_variable": bound.lower_variable,
        "upper_variable": bound.upper_variable,
        "provenance": provenance(spec),
    }
    store.write_json("scaling_summary.json", summary)
    emit_plot(
        [Series(label=f"{regime.value} theta={theta:.3g}", x=[p[0] for p in points], y=[p[1] for p in points])],
        store.path_for("scaling.svg"),
        xlabel=spec.scaling_variable,
        ylabel="lambda_star_mc",
        title=f"Secondary intensity scaling ({regime.value})",
        loglog=True,
        annotate_slope=True,
        provenance=provenance(spec, artifact="scaling"),
    )
    console.print(
        f"fitted exponent {slope:.3f} "
        f"(bounds {bound.lower_exponent:.3f} .. {bound.upper_exponent:.3f})"
    )
    return EXIT_OK


def fig3_tradeoff(
    base: ScenarioConfig, mode: CrossPowerMode
) -> Tuple[List[Dict[str, Any]], Series]:
    """Secondary vs primary capacity with equal total outage on both networks."""
    rows: List[Dict[str, Any]] = []
    xs: List[float] = []
    ys: List[float] = []
    for lambda_p in FIG3_LAMBDA_P:
        eps_nc = baseline_outage(float(lambda_p), base.beta_p, base.d_p, base.alpha)
        delta_p = FIG3_TOTAL_OUTAGE - eps_nc
        if delta_p <= 0:
            continue
        config = base.with_updates(
            lambda_p=float(lambda_p), delta_p=delta_p, eps_p_nc=None, eps_s=FIG3_TOTAL_OUTAGE
        )
        result = lambda_star_siso(config, mode)
        row = config.effective_row()
        row.update(
            lambda_star_analytic=result.lambda_star,
            binding_constraint=result.binding_constraint.value,
            capacity=result.capacity,
        )
        rows.append(row)
        xs.append(primary_capacity(float(lambda_p), FIG3_TOTAL_OUTAGE, base.beta_p))
        ys.append(result.capacity)
    return rows, Series(label=mode.value, x=xs, y=ys)


def delta_breakpoint(config: ScenarioConfig, mode: CrossPowerMode) -> Optional[float]:
    """``delta_p`` at which the two capacity terms cross, if the secondary term is positive."""
    vanishing = lambda_star_siso(config.with_updates(delta_p=0.0), mode)
    second = vanishing.second_term
    if second <= 0 or math.isinf(second):
        return None
    eps = config.baseline_outage
    unit = lambda_star_siso(
        config.with_updates(delta_p=(1.0 - eps) * (1.0 - math.exp(-1.0))), mode
    ).first_term
    # first_term(delta) = unit * -ln(1 - delta / (1 - eps))
    return (1.0 - eps) * (1.0 - math.exp(-second / unit))


def fig4_delta_curve(
    base: ScenarioConfig,
) -> Tuple[
    Dict[str, List[Dict[str, Any]]], List[Series], Dict[str, Optional[float]]
]:
    """lambda_star vs the added primary outage budget, for every cross-power mode."""
    rows: Dict[str, List[Dict[str, Any]]] = {}
    series: List[Series] = []
    breakpoints: Dict[str, Optional[float]] = {}
    for mode in CrossPowerMode:
        mode_rows = rows.setdefault(mode.value, [])
        ys: List[float] = []
        xs: List[float] = []
        for delta_p in FIG4_DELTA_P:
            config = base.with_updates(delta_p=float(delta_p))
            try:
                result = lambda_star_siso(config, mode)
            except InfeasibleError:
                continue
            row = config.effective_row()
            row.update(
                lambda_star_analytic=result.lambda_star,
                binding_constraint=result.binding_constraint.value,
                capacity=result.capacity,
            )
            mode_rows.append(row)
            xs.append(float(delta_p))
            ys.append(result.lambda_star)
        series.append(Series(label=mode.value, x=xs, y=ys))
        breakpoints[mode.value] = delta_breakpoint(base, mode)
    return rows, series, breakpoints


def _search_series(
    spec: ExperimentSpec,
    label: str,
    configs: List[Tuple[int, ScenarioConfig]],
    regime: Regime,
    rows: List[Dict[str, Any]],
) -> Series:
    xs: List[float] = []
    ys: List[float] = []
    for size, config in configs:
        result = evaluate_scenario(
            config, regime, spec.plan, spec.mode, mc=True, tolerance=spec.search_tolerance
        )
        result.row["series"] = label
        rows.append(result.row)
        xs.append(float(size))
        ys.append(float(result.lambda_star or 0.0))
    return Series(label=label, x=xs, y=ys)


def run_figures(spec: ExperimentSpec, store: ResultStore) -> int:
    base = spec.scenario
    sizes = spec.scaling_sizes
    for figure in spec.figures:
        log = logger.bind(figure=figure)
        if figure == "fig3":
            rows, line = fig3_tradeoff(base, spec.mode)
            _write_rows(store, spec, "fig3", rows)
            emit_plot(
                [line],
                store.path_for("fig3.svg"),
                xlabel="primary capacity (bits/s/Hz/m^2)",
                ylabel="secondary capacity (bits/s/Hz/m^2)",
                title="Secondary vs primary transmission capacity",
                provenance=provenance(spec, artifact="fig3"),
            )
        elif figure == "fig4":
            mode_tables, lines, breakpoints = fig4_delta_curve(base)
            for mode_name, mode_rows in mode_tables.items():
                _write_rows(store, spec, f"fig4_{mode_name}", mode_rows)
            store.write_json(
                "fig4_breakpoints.json",
                {"breakpoints": breakpoints, "provenance": provenance(spec)},
            )
            emit_plot(
                [line for line in lines if len(line.x) >= 2],
                store.path_for("fig4.svg"),
                xlabel="delta_p",
                ylabel="lambda_star",
                title="Secondary intensity vs added primary outage",
                provenance=provenance(spec, artifact="fig4"),
            )
        elif figure == "fig5":
            rows = []
            lines = []
            for theta in FIG5_THETAS:
                configs = [
                    (n, _scaled_config(base, Regime.MISO, "N", n, theta))
                    for n in sizes
                ]
                lines.append(
                    _search_series(spec, f"theta={theta:.3g}", configs, Regime.MISO, rows)
                )
            _write_rows(store, spec, "fig5", rows)
            emit_plot(
                lines,
                store.path_for("fig5.svg"),
                xlabel="N",
                ylabel="lambda_star_mc",
                title="MISO secondary intensity vs transmit antennas",
                provenance=provenance(spec, artifact="fig5"),
            )
        elif figure == "fig6":
            rows = []
            theta = base.theta or 0.5
            square = [
                (n, _scaled_config(base, Regime.MIMO, "N", n, theta)) for n in sizes
            ]
            single = [
                (n, _scaled_config(base.with_updates(N=1), Regime.MIMO, "M", n, theta))
                for n in sizes
            ]
            lines = [
                _search_series(spec, "N=M", square, Regime.MIMO, rows),
                _search_series(spec, "N=1", single, Regime.MIMO, rows),
            ]
            _write_rows(store, spec, "fig6", rows)
            emit_plot(
                lines,
                store.path_for("fig6.svg"),
                xlabel="antennas",
                ylabel="lambda_star_mc",
                title="MIMO secondary intensity vs antennas",
                provenance=provenance(spec, artifact="fig6"),
            )
        log.info("figure_done")
    return EXIT_OK


HANDLERS: Dict[Command, Callable[[ExperimentSpec, ResultStore], int]] = {
    Command.CAPACITY: run_capacity,
    Command.SWEEP: run_sweep,
    Command.VALIDATE: run_validate,
    Command.SCALING: run_scaling,
    Command.FIGURES: run_figures,
}


def apply_environment(spec: ExperimentSpec) -> ExperimentSpec:
    """Apply the ``COGCAP_SEED`` override, which wins over file and flags."""
    seed = get_settings().seed
    if seed is None:
        return spec
    plan = spec.plan.model_copy(update={"master_seed": seed})
    return spec.model_copy(update={"plan": plan})


def _report_error(exc: Exception, code: int) -> int:
    if isinstance(exc, CogcapError):
        payload: Any = exc.to_dict()
    else:
        payload = {"error": type(exc).__name__, "message": str(exc)}
    console.print({"exit_code": code, **payload})
    logger.error("experiment_failed", exit_code=code, error=type(exc).__name__)
    return code


def run(spec: ExperimentSpec) -> int:
    """Execute an experiment and return its exit code."""
    spec = apply_environment(spec)
    log = logger.bind(command=spec.command.value, master_seed=spec.plan.master_seed)
    try:
        store = create_result_store(spec.output_dir or get_settings().results_root)
        store.write_manifest(provenance(spec))
        log.info("experiment_started", output=store.get_uri())
        code = HANDLERS[spec.command](spec, store)
    except InfeasibleError as exc:
        return _report_error(exc, EXIT_INFEASIBLE)
    except (ParameterError, PlotError, DivergenceError, ValidationError, ValueError) as exc:
        return _report_error(exc, EXIT_INVALID)
    except OSError as exc:
        return _report_error(exc, EXIT_IO)
    except CogcapError as exc:
        return _report_error(exc, EXIT_FAILURE)
    log.info("experiment_finished", exit_code=code)
    return code

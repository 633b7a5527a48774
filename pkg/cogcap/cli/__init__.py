"""
Command Line Interface for cogcap.

Every command accepts a JSON (or YAML) experiment file via ``--config``;
flags and ``--set key=value`` pairs override its fields, and ``COGCAP_SEED``
overrides the master seed last.
"""

import json
from pathlib import Path
from typing import Any, Dict, List, Optional

import typer
import yaml
from pydantic import ValidationError
from rich.console import Console

from ..config import get_settings
from ..enums import Command, CrossPowerMode, OutputFormat, Regime
from ..errors import ParameterError
from ..log import configure_logging
from ..schemas.experiment import ExperimentSpec
from ..schemas.plan import TrialPlan
from ..schemas.scenario import ScenarioConfig
from .experiments import EXIT_INVALID, run

app = typer.Typer(help="cogcap - secondary network transmission capacity experiments")
console = Console(stderr=True)

SCENARIO_KEYS = set(ScenarioConfig.model_fields)
PLAN_KEYS = set(TrialPlan.model_fields)
SPEC_KEYS = set(ExperimentSpec.model_fields)


def load_config_file(path: Path) -> Dict[str, Any]:
    """Parse a JSON or YAML experiment document.

    Raises:
        ParameterError: If the file is unreadable or not a mapping
    """
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ParameterError(f"cannot read config {path}: {exc}") from exc
    try:
        if path.suffix.lower() in (".yaml", ".yml"):
            data = yaml.safe_load(text)
        else:
            data = json.loads(text)
    except (json.JSONDecodeError, yaml.YAMLError) as exc:
        raise ParameterError(f"cannot parse config {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise ParameterError(f"config {path} must hold a mapping")
    return data


def _parse_scalar(raw: str) -> Any:
    try:
        return json.loads(raw)
    except json.JSONDecodeError:
        return raw


def apply_override(document: Dict[str, Any], assignment: str) -> None:
    """Apply one ``key=value`` override to an experiment document.

    Bare keys are routed to the scenario, the plan or the experiment by
    name; dotted keys (``plan.trials``) address a section directly.

    Raises:
        ParameterError: For a malformed assignment or an unknown key
    """
    key, sep, raw = assignment.partition("=")
    key = key.strip()
    if not sep or not key:
        raise ParameterError(f"override '{assignment}' is not of the form key=value")
    value = _parse_scalar(raw.strip())

    if "." in key:
        section, _, field = key.partition(".")
        if section not in ("scenario", "plan"):
            raise ParameterError(f"unknown section '{section}' in override '{key}'")
        document.setdefault(section, {})[field] = value
    elif key in SCENARIO_KEYS:
        document.setdefault("scenario", {})[key] = value
    elif key in PLAN_KEYS:
        document.setdefault("plan", {})[key] = value
    elif key in SPEC_KEYS:
        document[key] = value
    else:
        raise ParameterError(f"unknown override key '{key}'")


def build_spec(
    command: Command,
    *,
    config: Optional[Path] = None,
    overrides: Optional[List[str]] = None,
    out: Optional[str] = None,
    trials: Optional[int] = None,
    seed: Optional[int] = None,
    mode: Optional[CrossPowerMode] = None,
    regime: Optional[Regime] = None,
    workers: Optional[int] = None,
    mc: Optional[bool] = None,
    fmt: Optional[OutputFormat] = None,
    extra: Optional[Dict[str, Any]] = None,
) -> ExperimentSpec:
    """Merge file, flags and overrides into a validated experiment spec.

    Raises:
        ParameterError: Unreadable file or bad override
        pydantic.ValidationError: Invalid merged document
    """
    settings = get_settings()
    document: Dict[str, Any] = load_config_file(config) if config else {}
    document["command"] = command.value
    plan: Dict[str, Any] = dict(document.get("plan") or {})
    plan.setdefault("trials", settings.default_trials)
    plan.setdefault("workers", settings.workers)
    document["plan"] = plan

    for assignment in overrides or []:
        apply_override(document, assignment)

    flags: Dict[str, Any] = {
        "output_dir": out,
        "mode": mode.value if mode else None,
        "regime": regime.value if regime else None,
        "mc": mc,
        "format": fmt.value if fmt else None,
    }
    document.update({key: value for key, value in flags.items() if value is not None})
    document.update(extra or {})
    if trials is not None:
        document["plan"]["trials"] = trials
    if seed is not None:
        document["plan"]["master_seed"] = seed
    if workers is not None:
        document["plan"]["workers"] = workers
    return ExperimentSpec.model_validate(document)


def _execute(command: Command, **options: Any) -> None:
    configure_logging()
    try:
        spec = build_spec(command, **options)
    except (ParameterError, ValidationError) as exc:
        payload = exc.to_dict() if isinstance(exc, ParameterError) else {
            "error": "ValidationError",
            "message": str(exc),
        }
        console.print({"exit_code": EXIT_INVALID, **payload})
        raise typer.Exit(code=EXIT_INVALID)
    code = run(spec)
    if code:
        raise typer.Exit(code=code)


ConfigOption = typer.Option(None, "--config", "-c", help="JSON or YAML experiment file")
SetOption = typer.Option(None, "--set", help="Override a field: key=value (repeatable)")
OutOption = typer.Option(None, "--out", "-o", help="Output directory or file:// URI")
TrialsOption = typer.Option(None, "--trials", help="Monte Carlo trials per estimate")
SeedOption = typer.Option(None, "--seed", help="Master seed")
ModeOption = typer.Option(None, "--mode", help="Cross-power variant of the capacity formula")
RegimeOption = typer.Option(None, "--regime", help="baseline, siso, miso or mimo")
WorkersOption = typer.Option(None, "--workers", help="Worker processes for trials")
FormatOption = typer.Option(None, "--format", help="csv or json result tables")


@app.command()
def capacity(
    config: Optional[Path] = ConfigOption,
    set_: Optional[List[str]] = SetOption,
    out: Optional[str] = OutOption,
    trials: Optional[int] = TrialsOption,
    seed: Optional[int] = SeedOption,
    mode: Optional[CrossPowerMode] = ModeOption,
    regime: Optional[Regime] = RegimeOption,
    workers: Optional[int] = WorkersOption,
    fmt: Optional[OutputFormat] = FormatOption,
    mc: Optional[bool] = typer.Option(None, "--mc/--no-mc", help="Add a Monte Carlo search"),
):
    """Maximum secondary intensity and transmission capacity for one scenario."""
    _execute(
        Command.CAPACITY,
        config=config,
        overrides=set_,
        out=out,
        trials=trials,
        seed=seed,
        mode=mode,
        regime=regime,
        workers=workers,
        mc=mc,
        fmt=fmt,
    )


@app.command()
def sweep(
    axis: Optional[str] = typer.Option(None, "--axis", help="Scenario field to sweep"),
    values: Optional[str] = typer.Option(None, "--values", help="Comma-separated values"),
    config: Optional[Path] = ConfigOption,
    set_: Optional[List[str]] = SetOption,
    out: Optional[str] = OutOption,
    trials: Optional[int] = TrialsOption,
    seed: Optional[int] = SeedOption,
    mode: Optional[CrossPowerMode] = ModeOption,
    regime: Optional[Regime] = RegimeOption,
    workers: Optional[int] = WorkersOption,
    fmt: Optional[OutputFormat] = FormatOption,
    mc: Optional[bool] = typer.Option(None, "--mc/--no-mc", help="Add a Monte Carlo search"),
):
    """One result row per value of a scenario field."""
    extra: Dict[str, Any] = {}
    if axis is not None or values is not None:
        parsed = [item.strip() for item in (values or "").split(",") if item.strip()]
        try:
            extra["sweep"] = {"name": axis or "", "values": [float(v) for v in parsed]}
        except ValueError:
            console.print({"exit_code": EXIT_INVALID, "message": f"bad values '{values}'"})
            raise typer.Exit(code=EXIT_INVALID)
    _execute(
        Command.SWEEP,
        config=config,
        overrides=set_,
        out=out,
        trials=trials,
        seed=seed,
        mode=mode,
        regime=regime,
        workers=workers,
        mc=mc,
        fmt=fmt,
        extra=extra,
    )


@app.command()
def validate(
    config: Optional[Path] = ConfigOption,
    set_: Optional[List[str]] = SetOption,
    out: Optional[str] = OutOption,
    trials: Optional[int] = TrialsOption,
    seed: Optional[int] = SeedOption,
    workers: Optional[int] = WorkersOption,
):
    """Distributional checks of the channel and interference model."""
    _execute(
        Command.VALIDATE,
        config=config,
        overrides=set_,
        out=out,
        trials=trials,
        seed=seed,
        workers=workers,
    )


@app.command()
def scaling(
    variable: Optional[str] = typer.Option(None, "--variable", help="N or M"),
    sizes: Optional[str] = typer.Option(None, "--sizes", help="Comma-separated sizes"),
    config: Optional[Path] = ConfigOption,
    set_: Optional[List[str]] = SetOption,
    out: Optional[str] = OutOption,
    trials: Optional[int] = TrialsOption,
    seed: Optional[int] = SeedOption,
    regime: Optional[Regime] = RegimeOption,
    workers: Optional[int] = WorkersOption,
    fmt: Optional[OutputFormat] = FormatOption,
):
    """Secondary intensity against antenna count, with the fitted exponent."""
    extra: Dict[str, Any] = {}
    if variable is not None:
        extra["scaling_variable"] = variable
    if sizes is not None:
        try:
            extra["scaling_sizes"] = [int(s) for s in sizes.split(",") if s.strip()]
        except ValueError:
            console.print({"exit_code": EXIT_INVALID, "message": f"bad sizes '{sizes}'"})
            raise typer.Exit(code=EXIT_INVALID)
    _execute(
        Command.SCALING,
        config=config,
        overrides=set_,
        out=out,
        trials=trials,
        seed=seed,
        regime=regime or Regime.MISO,
        workers=workers,
        fmt=fmt,
        extra=extra,
    )


@app.command()
def figures(
    names: Optional[List[str]] = typer.Argument(None, help="fig3 fig4 fig5 fig6 (default all)"),
    config: Optional[Path] = ConfigOption,
    set_: Optional[List[str]] = SetOption,
    out: Optional[str] = OutOption,
    trials: Optional[int] = TrialsOption,
    seed: Optional[int] = SeedOption,
    mode: Optional[CrossPowerMode] = ModeOption,
    workers: Optional[int] = WorkersOption,
    fmt: Optional[OutputFormat] = FormatOption,
):
    """Reproduce the capacity figures as CSV tables and SVG plots."""
    extra: Dict[str, Any] = {"figures": names} if names else {}
    _execute(
        Command.FIGURES,
        config=config,
        overrides=set_,
        out=out,
        trials=trials,
        seed=seed,
        mode=mode,
        workers=workers,
        fmt=fmt,
        extra=extra,
    )


def main() -> None:
    """Console-script entry point."""
    app()


if __name__ == "__main__":
    main()

"""
Experiment definition consumed by the CLI runner.
"""

from __future__ import annotations

from typing import List, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator

from ..enums import Command, CrossPowerMode, OutputFormat, Regime
from .plan import TrialPlan
from .scenario import ScenarioConfig

FIGURES = ("fig3", "fig4", "fig5", "fig6")


class SweepAxis(BaseModel):
    """One scenario field and the values it takes."""

    model_config = ConfigDict(extra="forbid")

    name: str
    values: List[float] = Field(..., min_length=1)

    @model_validator(mode="after")
    def check_field_name(self) -> "SweepAxis":
        if self.name not in ScenarioConfig.model_fields:
            raise ValueError(
                f"sweep axis '{self.name}' is not a scenario field. "
                f"Allowed: {', '.join(ScenarioConfig.model_fields)}"
            )
        return self


class ExperimentSpec(BaseModel):
    """A single batch experiment."""

    model_config = ConfigDict(extra="forbid")

    command: Command
    scenario: ScenarioConfig = Field(default_factory=ScenarioConfig.reference_preset)
    regime: Regime = Regime.SISO
    sweep: Optional[SweepAxis] = None
    plan: TrialPlan = Field(default_factory=TrialPlan)
    output_dir: Optional[str] = Field(
        None, description="Artifact directory or file:// URI; None = results_root setting"
    )
    mode: CrossPowerMode = CrossPowerMode.CORRECTED
    format: OutputFormat = OutputFormat.CSV
    mc: bool = Field(False, description="Add a Monte Carlo cross-check")
    figures: List[str] = Field(default_factory=lambda: list(FIGURES))
    scaling_variable: Literal["N", "M"] = "N"
    scaling_sizes: List[int] = Field(default_factory=lambda: [2, 4, 8, 16])
    search_tolerance: float = Field(0.05, gt=0, lt=1)

    @model_validator(mode="after")
    def check_command_inputs(self) -> "ExperimentSpec":
        if self.command == Command.SWEEP and self.sweep is None:
            raise ValueError("sweep command requires a sweep axis")
        unknown = [f for f in self.figures if f not in FIGURES]
        if unknown:
            raise ValueError(f"unknown figures: {', '.join(unknown)}")
        if self.command == Command.SCALING:
            sizes = self.scaling_sizes
            if len(sizes) < 3 or any(b <= a for a, b in zip(sizes, sizes[1:])):
                raise ValueError("scaling sizes need >= 3 strictly increasing values")
        return self

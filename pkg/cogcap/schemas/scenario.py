"""
Scenario parameters of the coexisting primary/secondary network model.

Field names follow the model notation (``P_p``, ``N``, ``k`` ...) so that
config files, ``--set`` overrides and CSV columns read like the equations.
"""

from __future__ import annotations

import math
from typing import Any, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, model_validator

from ..enums import Regime
from ..errors import ParameterError
from ..geometry.ppp import AccessConfig


class ScenarioConfig(BaseModel):
    """All scalar model parameters.

    ``eps_p_nc`` may be omitted, in which case it is derived from the
    baseline (secondary-free) outage closed form at ``lambda_p``. When the
    raw intensities ``lambda_1``/``lambda_2`` are given together with an
    ``access_probability``, the active intensities are their ALOHA thinning.
    When ``theta`` is set, ``k`` and ``m`` are the fraction ``theta`` of the
    transmit/receive antennas, rounded up and capped at ``N-1``/``M-1``.
    """

    model_config = ConfigDict(extra="forbid")

    alpha: float = Field(3.0, gt=2, description="Path-loss exponent")
    P_p: float = Field(2.0, ge=0, description="Primary transmit power (W)")
    P_s: float = Field(1.0, ge=0, description="Secondary transmit power (W)")
    d_p: float = Field(1.0, gt=0, description="Primary link distance (m)")
    d_s: float = Field(1.0, gt=0, description="Secondary link distance (m)")
    beta_p: float = Field(1.0, ge=0, description="Primary SIR threshold")
    beta_s: float = Field(1.0, ge=0, description="Secondary SIR threshold")
    lambda_p: float = Field(0.01, ge=0, description="Active primary intensity (1/m^2)")
    lambda_s: float = Field(0.0, ge=0, description="Active secondary intensity (1/m^2)")
    N: int = Field(1, ge=1, description="Secondary transmit antennas")
    M: int = Field(1, ge=1, description="Secondary receive antennas")
    k: int = Field(0, ge=0, description="Transmit DOF spent on nulling")
    m: int = Field(0, ge=0, description="Receive DOF spent on cancelation")
    eps_p_nc: Optional[float] = Field(
        None, ge=0, le=1, description="Primary outage without secondary network"
    )
    delta_p: float = Field(0.05, ge=0, le=1, description="Added primary outage budget")
    eps_s: float = Field(0.1, ge=0, le=1, description="Secondary outage constraint")

    access_probability: Optional[float] = Field(None, ge=0, le=1)
    lambda_1: Optional[float] = Field(None, ge=0, description="Raw primary intensity")
    lambda_2: Optional[float] = Field(None, ge=0, description="Raw secondary intensity")
    theta: Optional[float] = Field(None, gt=0, le=1, description="DOF fraction")

    @model_validator(mode="after")
    def resolve_derived_fields(self) -> "ScenarioConfig":
        """Apply ALOHA thinning and the theta split, then check DOF bounds."""
        if self.access_probability is not None:
            access = AccessConfig(access_probability=self.access_probability)
            if self.lambda_1 is not None:
                object.__setattr__(
                    self, "lambda_p", access.active_intensity(self.lambda_1)
                )
            if self.lambda_2 is not None:
                object.__setattr__(
                    self, "lambda_s", access.active_intensity(self.lambda_2)
                )
        elif self.lambda_1 is not None or self.lambda_2 is not None:
            raise ValueError("lambda_1/lambda_2 require access_probability")

        if self.theta is not None:
            object.__setattr__(
                self, "k", min(self.N - 1, math.ceil(self.theta * self.N - 1e-12))
            )
            object.__setattr__(
                self, "m", min(self.M - 1, math.ceil(self.theta * self.M - 1e-12))
            )

        if self.k >= self.N:
            raise ValueError(f"k={self.k} must be smaller than N={self.N}")
        if self.m >= self.M:
            raise ValueError(f"m={self.m} must be smaller than M={self.M}")
        if self.eps_p_nc is not None and self.eps_p_nc + self.delta_p >= 1:
            raise ValueError("eps_p_nc + delta_p must be below 1")
        return self

    @property
    def baseline_outage(self) -> float:
        """``eps_p_nc`` as configured, else the closed form at ``lambda_p``."""
        if self.eps_p_nc is not None:
            return self.eps_p_nc
        from ..analytic.capacity import baseline_outage

        return baseline_outage(self.lambda_p, self.beta_p, self.d_p, self.alpha)

    @property
    def primary_outage_budget(self) -> float:
        """Total tolerated primary outage ``eps_p_nc + delta_p``."""
        return self.baseline_outage + self.delta_p

    @property
    def rate_p(self) -> float:
        return math.log2(1.0 + self.beta_p)

    @property
    def rate_s(self) -> float:
        return math.log2(1.0 + self.beta_s)

    @property
    def power_ratio(self) -> float:
        """``P_p / P_s``."""
        if self.P_s == 0:
            raise ParameterError("P_s must be positive for a power ratio")
        return self.P_p / self.P_s

    def dof(self, regime: Regime) -> Tuple[int, int]:
        """Effective ``(k, m)`` for a regime.

        Raises:
            ParameterError: If the antenna counts do not fit the regime
        """
        regime = Regime(regime)
        if regime == Regime.BASELINE:
            return 0, 0
        if regime == Regime.SISO:
            if self.N != 1 or self.M != 1:
                raise ParameterError(
                    f"siso regime requires N=M=1 (got N={self.N}, M={self.M})"
                )
            return 0, 0
        if regime == Regime.MISO:
            if self.M != 1:
                raise ParameterError(f"miso regime requires M=1 (got M={self.M})")
            return self.k, 0
        return self.N - 1, self.m

    def with_updates(self, **updates: Any) -> "ScenarioConfig":
        """Return a re-validated copy with ``updates`` applied."""
        data = self.model_dump()
        # Explicit values win over the fields they are normally derived from
        for derived, sources in (
            ("lambda_p", ("lambda_1",)),
            ("lambda_s", ("lambda_2",)),
            ("k", ("theta",)),
            ("m", ("theta",)),
        ):
            if derived in updates:
                for source in sources:
                    if source not in updates:
                        data[source] = None
        data.update(updates)
        return ScenarioConfig.model_validate(data)

    def effective_row(self) -> dict:
        """Field values with derived entries resolved (for result rows)."""
        row = self.model_dump()
        row["eps_p_nc"] = self.baseline_outage
        return row

    @classmethod
    def reference_preset(cls, **overrides: Any) -> "ScenarioConfig":
        """Simulation preset: alpha=3, d=1 m, P_p/P_s=2, beta=1, lambda_p=0.01."""
        data: dict = {
            "alpha": 3.0,
            "P_p": 2.0,
            "P_s": 1.0,
            "d_p": 1.0,
            "d_s": 1.0,
            "beta_p": 1.0,
            "beta_s": 1.0,
            "lambda_p": 0.01,
            "eps_s": 0.1,
            "delta_p": 0.05,
        }
        data.update(overrides)
        return cls.model_validate(data)

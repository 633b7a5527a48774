"""
Monte Carlo trial plan.
"""

from __future__ import annotations

from typing import Optional

from pydantic import BaseModel, ConfigDict, Field

from ..enums import CancelMode, ChannelModel

DEFAULT_MASTER_SEED = 20100101


class TrialPlan(BaseModel):
    """How many trials to run and how each trial is synthesized.

    Trial ``t`` always draws from a generator derived from
    ``(master_seed, t)`` only, so estimates do not depend on ``workers``.
    """

    model_config = ConfigDict(extra="forbid")

    trials: int = Field(20000, ge=1)
    master_seed: int = Field(DEFAULT_MASTER_SEED, ge=0, lt=2**64)
    region_radius: Optional[float] = Field(
        None, gt=0, description="Sampling disc radius (m); None = auto-size"
    )
    truncation_tolerance: float = Field(0.01, gt=0, le=0.1)
    workers: int = Field(1, ge=1)
    channel_model: ChannelModel = ChannelModel.MARGINAL
    cancel_mode: CancelMode = CancelMode.EXACT_SET

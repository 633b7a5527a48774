"""
Per-trial random streams.

Trial ``t`` of a plan draws from a generator derived from
``(master_seed, t)`` alone, which makes estimates independent of how
trials are distributed over workers.
"""

from __future__ import annotations

import numpy as np


def trial_seed_sequence(
    master_seed: int, trial_index: int, stream: int = 0
) -> np.random.SeedSequence:
    """Seed sequence of one trial; ``stream`` separates unrelated uses of a seed."""
    return np.random.SeedSequence(entropy=master_seed, spawn_key=(trial_index, stream))


def trial_rng(master_seed: int, trial_index: int, stream: int = 0) -> np.random.Generator:
    return np.random.Generator(
        np.random.PCG64(trial_seed_sequence(master_seed, trial_index, stream))
    )

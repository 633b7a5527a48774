"""Fading channels, null-space beamforming and receive cancelation."""

from .mimo import (
    Beamformer,
    Combiner,
    beamformers_for_targets,
    combiner_basis,
    draw_gaussian,
    draw_gaussian_matrix,
    effective_gain,
    null_space_basis,
    null_space_bases,
    receive_combiner,
    transmit_beamformer,
)

__all__ = [
    "Beamformer",
    "Combiner",
    "beamformers_for_targets",
    "combiner_basis",
    "draw_gaussian",
    "draw_gaussian_matrix",
    "effective_gain",
    "null_space_basis",
    "null_space_bases",
    "receive_combiner",
    "transmit_beamformer",
]

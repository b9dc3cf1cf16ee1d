"""Absorbing-receiver diffusion channel: closed forms and Brownian simulation."""

from ._core import (
    AbsorptionMode,
    ChannelGeometry,
    DiffusionEnv,
    EmissionSpec,
    SimConfig,
    SimResult,
    erfc,
    erfcx,
    estimate_peak,
    expected_hits,
    hitting_fraction,
    hitting_rate,
    molecule_distribution,
    peak_amplitude,
    peak_time,
    simulate,
    survival_fraction,
)

__all__ = [
    "AbsorptionMode",
    "ChannelGeometry",
    "DiffusionEnv",
    "EmissionSpec",
    "SimConfig",
    "SimResult",
    "erfc",
    "erfcx",
    "estimate_peak",
    "expected_hits",
    "hitting_fraction",
    "hitting_rate",
    "molecule_distribution",
    "peak_amplitude",
    "peak_time",
    "simulate",
    "survival_fraction",
]

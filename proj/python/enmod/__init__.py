"""Energy-detection constellation design and simulation for noncoherent massive SIMO."""

import json as _json

from ._core import (
    ChannelSpec,
    Constellation,
    DesignConfig,
    DesignOutcome,
    NotSamplable,
    RateOracle,
    Side,
    SimReport,
    UncertaintyBox,
    ask_constellation,
    chernoff_ser_bound,
    design_exact,
    design_moments,
    design_robust,
    error_exponent,
    min_distance_constellation,
    sigma2_from_snr,
    simulate_energy,
    snr_from_sigma2,
)
from ._core import run_command as _run_command

__all__ = [
    "ChannelSpec",
    "Constellation",
    "DesignConfig",
    "DesignOutcome",
    "NotSamplable",
    "RateOracle",
    "Side",
    "SimReport",
    "UncertaintyBox",
    "ask_constellation",
    "chernoff_ser_bound",
    "design_exact",
    "design_moments",
    "design_robust",
    "error_exponent",
    "min_distance_constellation",
    "run",
    "sigma2_from_snr",
    "simulate_energy",
    "snr_from_sigma2",
]


def run(command, config=None):
    """Run a CLI command with a config dict. Returns (exit_code, stdout, stderr)."""
    return _run_command(command, _json.dumps(config or {}))

"""Scenario assembly, sweeps, result files and the command line."""

from .link import run_link
from .scenario import FronthaulScenario, Seeds, SimSettings, SweepSettings, load_scenario
from .sweep import SweepPoint, SweepResult, dynamic_range, run_evm_sweep, run_figure3, run_figure4

__all__ = [
    "FronthaulScenario",
    "Seeds",
    "SimSettings",
    "SweepPoint",
    "SweepResult",
    "SweepSettings",
    "dynamic_range",
    "load_scenario",
    "run_evm_sweep",
    "run_figure3",
    "run_figure4",
    "run_link",
]

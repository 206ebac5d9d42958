"""Pseudo-spectral simulator for the generalised two-component Hunter-Saxton system."""
from __future__ import annotations

from .analysis import (
    BlowupFit,
    ConservationMonitor,
    ConservationReport,
    check_blowup_hypotheses,
    conservation_report,
    fit_blowup,
    riccati_exact,
    riccati_numeric,
)
from .characteristics import CharacteristicEnsemble, CharacteristicTracker, advect
from .config import AppConfig, ScenarioConfig, SweepConfig, load_config, load_scenario, load_sweep
from .core import InitialDataDescriptor, PeriodicGrid, RealField, SimState, SpectralField, SystemParams, make_grid, sample
from .database import RunOverview, RunRecord, Storage, create_storage
from .evolution import RunOutcome, StepControl, StepEvent, rhs, run, step
from .oracle import fd_rhs, fd_run
from .pipeline import AcceptanceSuite, ScenarioRunner
from .runtime import RunnerResources, create_runner

__all__ = [
    "AcceptanceSuite",
    "AppConfig",
    "BlowupFit",
    "CharacteristicEnsemble",
    "CharacteristicTracker",
    "ConservationMonitor",
    "ConservationReport",
    "InitialDataDescriptor",
    "PeriodicGrid",
    "RealField",
    "RunOutcome",
    "RunOverview",
    "RunRecord",
    "RunnerResources",
    "ScenarioConfig",
    "ScenarioRunner",
    "SimState",
    "SpectralField",
    "StepControl",
    "StepEvent",
    "Storage",
    "SweepConfig",
    "SystemParams",
    "advect",
    "check_blowup_hypotheses",
    "conservation_report",
    "create_runner",
    "create_storage",
    "fd_rhs",
    "fd_run",
    "fit_blowup",
    "load_config",
    "load_scenario",
    "load_sweep",
    "make_grid",
    "riccati_exact",
    "riccati_numeric",
    "rhs",
    "run",
    "sample",
    "step",
]

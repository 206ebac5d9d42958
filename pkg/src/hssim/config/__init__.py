"""Configuration helpers for hssim."""
from __future__ import annotations

from .presets import NEG_HALF_AMPLITUDE, PRESET_ALIASES, SCENARIO_PRESETS, SWEEP_PRESETS, get_preset, get_sweep_preset
from .scenario import (
    OBSERVER_KINDS,
    ObserverKind,
    ObserverSpec,
    ScenarioConfig,
    ScenarioConfigError,
    SweepConfig,
    load_scenario,
    load_sweep,
    parse_scenario,
    parse_sweep,
)
from .settings import (
    AppConfig,
    ConfigFieldError,
    LoggingConfig,
    OutputConfig,
    StorageConfig,
    load_config,
)

__all__ = [
    "AppConfig",
    "NEG_HALF_AMPLITUDE",
    "PRESET_ALIASES",
    "ConfigFieldError",
    "LoggingConfig",
    "OBSERVER_KINDS",
    "ObserverKind",
    "ObserverSpec",
    "OutputConfig",
    "SCENARIO_PRESETS",
    "SWEEP_PRESETS",
    "ScenarioConfig",
    "ScenarioConfigError",
    "StorageConfig",
    "SweepConfig",
    "get_preset",
    "get_sweep_preset",
    "load_config",
    "load_scenario",
    "load_sweep",
    "parse_scenario",
    "parse_sweep",
]

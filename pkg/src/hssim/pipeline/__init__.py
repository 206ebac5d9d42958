"""Scenario orchestration and the acceptance suite."""
from __future__ import annotations

from .acceptance import AcceptanceSuite, CheckResult
from .recorders import SnapshotRecorder, SobolevRecorder, field_table
from .scenario_runner import (
    FLOAT_FORMAT,
    ProgressCallback,
    RunReport,
    RunnerEvent,
    RunnerEventKind,
    ScenarioRunner,
    SweepReport,
    SweepRow,
)

__all__ = [
    "AcceptanceSuite",
    "CheckResult",
    "FLOAT_FORMAT",
    "ProgressCallback",
    "RunReport",
    "RunnerEvent",
    "RunnerEventKind",
    "ScenarioRunner",
    "SnapshotRecorder",
    "SobolevRecorder",
    "SweepReport",
    "SweepRow",
    "field_table",
]

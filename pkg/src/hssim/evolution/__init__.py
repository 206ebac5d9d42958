"""Time stepping for the two-component system."""
from __future__ import annotations

from .stepper import (
    NumericalBreakdown,
    Observer,
    RunOutcome,
    RunStatus,
    StepControl,
    StepEvent,
    compute_a,
    persistence_quantity,
    propose_dt,
    raw_dt,
    resolution_indicator,
    rhs,
    run,
    step,
)

__all__ = [
    "NumericalBreakdown",
    "Observer",
    "RunOutcome",
    "RunStatus",
    "StepControl",
    "StepEvent",
    "compute_a",
    "persistence_quantity",
    "propose_dt",
    "raw_dt",
    "resolution_indicator",
    "rhs",
    "run",
    "step",
]

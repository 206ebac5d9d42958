"""Core domain entities used across the solver."""
from __future__ import annotations

from .sampling import (
    FAMILIES,
    InitialDataDescriptor,
    constant,
    cosine,
    fourier,
    make_grid,
    raised_cosine,
    sample,
    sine,
)
from .types import (
    Gauge,
    GridMismatchError,
    PeriodicGrid,
    RealField,
    SimState,
    SpectralField,
    SystemParams,
    zero_gauge,
)

__all__ = [
    "FAMILIES",
    "Gauge",
    "GridMismatchError",
    "InitialDataDescriptor",
    "PeriodicGrid",
    "RealField",
    "SimState",
    "SpectralField",
    "SystemParams",
    "constant",
    "cosine",
    "fourier",
    "make_grid",
    "raised_cosine",
    "sample",
    "sine",
    "zero_gauge",
]

"""Pseudo-spectral operators."""
from __future__ import annotations

from .operators import (
    TOL_MEAN,
    NonZeroMeanError,
    SobolevOrder,
    antiderivative,
    derivative,
    inner,
    interpolate,
    interpolate_fields,
    interpolate_many,
    low_pass,
    product,
    sobolev_norm,
    spectral_tail,
    to_physical,
    to_spectral,
)

__all__ = [
    "NonZeroMeanError",
    "SobolevOrder",
    "TOL_MEAN",
    "antiderivative",
    "derivative",
    "inner",
    "interpolate",
    "interpolate_fields",
    "interpolate_many",
    "low_pass",
    "product",
    "sobolev_norm",
    "spectral_tail",
    "to_physical",
    "to_spectral",
]

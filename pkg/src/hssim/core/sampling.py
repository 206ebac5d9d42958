"""Grid construction and closed-form initial data."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

import numpy as np

from .types import PeriodicGrid, RealField

Family = Literal["sine", "cosine", "constant", "raised_cosine", "fourier"]
FAMILIES: tuple[str, ...] = ("sine", "cosine", "constant", "raised_cosine", "fourier")


def make_grid(n: int) -> PeriodicGrid:
    """Return the uniform grid with ``n`` points ``x_j = j/n``."""

    return PeriodicGrid(n)


@dataclass(frozen=True, slots=True)
class InitialDataDescriptor:
    """Closed-form description of an initial profile.

    ``sine``/``cosine``: ``amplitude * trig(2 pi frequency x) + offset``.
    ``constant``: ``amplitude``.
    ``raised_cosine``: ``amplitude * (1 - cos(2 pi frequency x)) + offset``.
    ``fourier``: ``offset + sum_k cosines[k] cos(2 pi k x) + sines[k] sin(2 pi k x)``.
    """

    family: Family
    amplitude: float = 1.0
    frequency: int = 1
    offset: float = 0.0
    cosines: tuple[float, ...] = ()
    sines: tuple[float, ...] = ()

    def __post_init__(self) -> None:
        if self.family not in FAMILIES:
            raise ValueError(f"Unknown initial data family {self.family!r}; expected one of {', '.join(FAMILIES)}")
        if self.frequency < 0:
            raise ValueError(f"Frequency must be non-negative, got {self.frequency}")

    def evaluate(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=np.float64)
        phase = 2.0 * np.pi * self.frequency * x
        if self.family == "sine":
            return self.amplitude * np.sin(phase) + self.offset
        if self.family == "cosine":
            return self.amplitude * np.cos(phase) + self.offset
        if self.family == "constant":
            return np.full_like(x, self.amplitude)
        if self.family == "raised_cosine":
            return self.amplitude * (1.0 - np.cos(phase)) + self.offset
        values = np.full_like(x, self.offset)
        for k, c in enumerate(self.cosines):
            values = values + c * np.cos(2.0 * np.pi * k * x)
        for k, s in enumerate(self.sines):
            values = values + s * np.sin(2.0 * np.pi * k * x)
        return values

    def max_frequency(self) -> int:
        if self.family == "fourier":
            return max(len(self.cosines), len(self.sines), 1) - 1
        return self.frequency


def sample(descriptor: InitialDataDescriptor, grid: PeriodicGrid) -> RealField:
    """Evaluate ``descriptor`` at the grid nodes."""

    return RealField(grid, descriptor.evaluate(grid.points))


def sine(amplitude: float = 1.0, frequency: int = 1, offset: float = 0.0) -> InitialDataDescriptor:
    return InitialDataDescriptor("sine", amplitude=amplitude, frequency=frequency, offset=offset)


def cosine(amplitude: float = 1.0, frequency: int = 1, offset: float = 0.0) -> InitialDataDescriptor:
    return InitialDataDescriptor("cosine", amplitude=amplitude, frequency=frequency, offset=offset)


def constant(value: float) -> InitialDataDescriptor:
    return InitialDataDescriptor("constant", amplitude=value, frequency=0)


def raised_cosine(amplitude: float = 1.0, frequency: int = 1, offset: float = 0.0) -> InitialDataDescriptor:
    return InitialDataDescriptor("raised_cosine", amplitude=amplitude, frequency=frequency, offset=offset)


def fourier(cosines: tuple[float, ...] = (), sines: tuple[float, ...] = (), offset: float = 0.0) -> InitialDataDescriptor:
    return InitialDataDescriptor("fourier", cosines=tuple(cosines), sines=tuple(sines), offset=offset)


__all__ = [
    "FAMILIES",
    "InitialDataDescriptor",
    "constant",
    "cosine",
    "fourier",
    "make_grid",
    "raised_cosine",
    "sample",
    "sine",
]

"""Typed domain objects shared by every solver component."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

Gauge = Callable[[float], float]


class GridMismatchError(ValueError):
    """Raised when two fields that must share a grid do not."""


def zero_gauge(t: float) -> float:
    """The default gauge ``h(t) = 0``."""

    return 0.0


@dataclass(frozen=True, slots=True)
class PeriodicGrid:
    """Uniform collocation grid on the unit circle ``S = R/Z``."""

    n: int

    def __post_init__(self) -> None:
        if isinstance(self.n, bool) or not isinstance(self.n, (int, np.integer)):
            raise ValueError(f"Grid size must be an integer, got {self.n!r}")
        if self.n < 8 or self.n % 2:
            raise ValueError(f"Grid size must be even and at least 8, got {self.n}")

    @property
    def spacing(self) -> float:
        return 1.0 / self.n

    @property
    def points(self) -> np.ndarray:
        return np.arange(self.n) / self.n

    @property
    def wavenumbers(self) -> np.ndarray:
        """Signed integer wavenumbers in FFT order, Nyquist stored as ``+n/2``."""

        k = np.fft.fftfreq(self.n, d=1.0 / self.n).round().astype(np.int64)
        k[self.n // 2] = self.n // 2
        return k

    @property
    def rfft_wavenumbers(self) -> np.ndarray:
        return np.arange(self.n // 2 + 1, dtype=np.int64)

    def mirror_indices(self) -> np.ndarray:
        """Index of ``-x_j`` for every node ``x_j`` (modulo 1)."""

        return (-np.arange(self.n)) % self.n


@dataclass(frozen=True, slots=True, eq=False)
class RealField:
    """Real samples of a periodic function on a :class:`PeriodicGrid`."""

    grid: PeriodicGrid
    values: np.ndarray

    def __post_init__(self) -> None:
        values = np.array(self.values, dtype=np.float64)
        if values.shape != (self.grid.n,):
            raise ValueError(f"Expected {self.grid.n} samples, got shape {values.shape}")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @classmethod
    def zeros(cls, grid: PeriodicGrid) -> "RealField":
        return cls(grid, np.zeros(grid.n))

    @classmethod
    def constant(cls, grid: PeriodicGrid, value: float) -> "RealField":
        return cls(grid, np.full(grid.n, float(value)))

    def is_finite(self) -> bool:
        return bool(np.all(np.isfinite(self.values)))

    def max_abs(self) -> float:
        return float(np.max(np.abs(self.values)))

    def mean(self) -> float:
        """Trapezoid (equivalently spectral) quadrature of the field over one period."""

        return float(np.mean(self.values))

    def min(self) -> float:
        return float(np.min(self.values))

    def max(self) -> float:
        return float(np.max(self.values))

    def at_origin(self) -> float:
        return float(self.values[0])

    def mirrored(self) -> "RealField":
        """The field ``x -> f(-x)``."""

        return RealField(self.grid, self.values[self.grid.mirror_indices()])

    def check_grid(self, other: "RealField") -> None:
        if other.grid != self.grid:
            raise GridMismatchError(f"Fields live on different grids (n={self.grid.n} vs n={other.grid.n})")

    def _combine(self, other: "RealField | float", op: Callable[[np.ndarray, object], np.ndarray]) -> "RealField":
        if isinstance(other, RealField):
            self.check_grid(other)
            return RealField(self.grid, op(self.values, other.values))
        return RealField(self.grid, op(self.values, float(other)))

    def __add__(self, other: "RealField | float") -> "RealField":
        return self._combine(other, np.add)

    __radd__ = __add__

    def __sub__(self, other: "RealField | float") -> "RealField":
        return self._combine(other, np.subtract)

    def __mul__(self, scalar: float) -> "RealField":
        if isinstance(scalar, RealField):
            raise TypeError("Use spectral.product for field products")
        return RealField(self.grid, self.values * float(scalar))

    __rmul__ = __mul__

    def __neg__(self) -> "RealField":
        return RealField(self.grid, -self.values)


@dataclass(frozen=True, slots=True, eq=False)
class SpectralField:
    """Fourier coefficients ``f_k`` with ``f(x) = sum_k f_k exp(2 pi i k x)`` (FFT order)."""

    grid: PeriodicGrid
    coeffs: np.ndarray

    def __post_init__(self) -> None:
        coeffs = np.asarray(self.coeffs, dtype=np.complex128)
        if coeffs.shape != (self.grid.n,):
            raise ValueError(f"Expected {self.grid.n} coefficients, got shape {coeffs.shape}")
        coeffs.setflags(write=False)
        object.__setattr__(self, "coeffs", coeffs)

    def coeff(self, k: int) -> complex:
        """Coefficient of wavenumber ``k`` (``-n/2 < k <= n/2``)."""

        half = self.grid.n // 2
        if not -half < k <= half:
            raise IndexError(f"Wavenumber {k} outside the resolved band")
        return complex(self.coeffs[k % self.grid.n])

    def hermitian_defect(self) -> float:
        """Largest deviation from ``coeff(-k) = conj(coeff(k))``."""

        mirrored = self.coeffs[self.grid.mirror_indices()]
        return float(np.max(np.abs(mirrored - np.conj(self.coeffs))))


@dataclass(frozen=True, slots=True)
class SystemParams:
    """Parameters ``(alpha, kappa)`` of the system plus numerical switches."""

    alpha: float
    kappa: float
    gauge: Gauge = field(default=zero_gauge, compare=False)
    dealias: bool = True

    def __post_init__(self) -> None:
        for name in ("alpha", "kappa"):
            value = getattr(self, name)
            if not np.isfinite(value):
                raise ValueError(f"SystemParams.{name} must be finite, got {value!r}")


@dataclass(frozen=True, slots=True, eq=False)
class SimState:
    """Time plus the solution pair ``(u, rho)``."""

    t: float
    u: RealField
    rho: RealField

    def __post_init__(self) -> None:
        if self.t < 0:
            raise ValueError(f"Simulation time must be non-negative, got {self.t}")
        self.u.check_grid(self.rho)

    @property
    def grid(self) -> PeriodicGrid:
        return self.u.grid

    @property
    def u_x(self) -> RealField:
        from ..spectral import derivative

        return derivative(self.u)

    @property
    def m(self) -> RealField:
        """``m = -u_xx``."""

        from ..spectral import derivative

        return -derivative(derivative(self.u))

    def is_finite(self) -> bool:
        return self.u.is_finite() and self.rho.is_finite()

    def advanced(self, t: float, u: RealField, rho: RealField) -> "SimState":
        return SimState(t=t, u=u, rho=rho)


__all__ = [
    "Gauge",
    "GridMismatchError",
    "PeriodicGrid",
    "RealField",
    "SimState",
    "SpectralField",
    "SystemParams",
    "zero_gauge",
]

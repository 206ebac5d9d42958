"""Fourier-side operators on the unit circle.

All wavenumbers ``k`` are integers; the physical angular frequency is
``2 pi k`` because the period is one. The unmatched Nyquist mode is dropped by
differentiation and integration so both operators stay real.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ..core.types import PeriodicGrid, RealField, SpectralField

TOL_MEAN = 1e-10


class NonZeroMeanError(ValueError):
    """Raised when ``antiderivative`` receives an integrand with non-zero mean."""


@dataclass(frozen=True, slots=True)
class SobolevOrder:
    """Order ``s >= 0`` of the weight ``(1 + (2 pi k)^2)^(s/2)``."""

    s: float

    def __post_init__(self) -> None:
        if not np.isfinite(self.s) or self.s < 0:
            raise ValueError(f"Sobolev order must be finite and non-negative, got {self.s!r}")


def _angular(grid: PeriodicGrid) -> np.ndarray:
    """``2 pi i k`` on the rfft half spectrum with the Nyquist entry zeroed."""

    k = 2j * np.pi * grid.rfft_wavenumbers
    k[-1] = 0.0
    return k


def _cutoff_mask(grid: PeriodicGrid) -> np.ndarray:
    return grid.rfft_wavenumbers < grid.n / 3.0


def to_spectral(f: RealField) -> SpectralField:
    """Coefficients ``f_k`` normalised so that ``f(x) = sum_k f_k exp(2 pi i k x)``."""

    return SpectralField(f.grid, np.fft.fft(f.values) / f.grid.n)


def to_physical(f: SpectralField) -> RealField:
    return RealField(f.grid, np.fft.ifft(f.coeffs * f.grid.n).real)


def derivative(f: RealField) -> RealField:
    """Spectral ``d/dx``; exact for trigonometric polynomials below the Nyquist mode."""

    spectrum = np.fft.rfft(f.values) * _angular(f.grid)
    return RealField(f.grid, np.fft.irfft(spectrum, n=f.grid.n))


def antiderivative(f: RealField, *, tol_mean: float = TOL_MEAN) -> RealField:
    """Primitive ``F(x) = int_0^x f(y) dy`` of a mean-free field, pinned at ``F(0) = 0``."""

    mean = f.mean()
    if abs(mean) > tol_mean:
        raise NonZeroMeanError(f"Integrand mean {mean:.3e} exceeds tolerance {tol_mean:.1e}")
    spectrum = np.fft.rfft(f.values)
    angular = _angular(f.grid)
    primitive = np.zeros_like(spectrum)
    primitive[1:-1] = spectrum[1:-1] / angular[1:-1]
    values = np.fft.irfft(primitive, n=f.grid.n)
    return RealField(f.grid, values - values[0])


def low_pass(f: RealField) -> RealField:
    """Zero every mode with ``|k| >= n/3`` (the 2/3 rule)."""

    spectrum = np.fft.rfft(f.values)
    spectrum[~_cutoff_mask(f.grid)] = 0.0
    return RealField(f.grid, np.fft.irfft(spectrum, n=f.grid.n))


def product(f: RealField, g: RealField, *, dealias: bool = True) -> RealField:
    """Pointwise product, optionally dealiased by the 2/3 rule on inputs and output."""

    f.check_grid(g)
    if not dealias:
        return RealField(f.grid, f.values * g.values)
    filtered = RealField(f.grid, low_pass(f).values * low_pass(g).values)
    return low_pass(filtered)


def inner(f: RealField, g: RealField) -> float:
    """Quadrature ``<f, g>`` over one period."""

    f.check_grid(g)
    return float(np.mean(f.values * g.values))


def sobolev_norm(f: RealField, s: SobolevOrder | float) -> float:
    """``( sum_k (1 + (2 pi k)^2)^s |f_k|^2 )^(1/2)``."""

    order = s if isinstance(s, SobolevOrder) else SobolevOrder(float(s))
    coeffs = np.fft.fft(f.values) / f.grid.n
    weights = (1.0 + (2.0 * np.pi * f.grid.wavenumbers) ** 2) ** order.s
    return float(np.sqrt(np.sum(weights * np.abs(coeffs) ** 2)))


def interpolate_fields(fields: Sequence[RealField], xs: Sequence[float] | np.ndarray) -> np.ndarray:
    """Evaluate the trigonometric interpolants of several fields at the same points.

    Returns an array of shape ``(len(fields), len(xs))``; the Nyquist mode enters
    as a real cosine so the interpolant reproduces the samples at the nodes.
    """

    if not fields:
        return np.zeros((0, np.size(xs)))
    grid = fields[0].grid
    for other in fields[1:]:
        fields[0].check_grid(other)
    points = np.asarray(xs, dtype=np.float64)
    n = grid.n
    spectra = np.fft.rfft(np.stack([f.values for f in fields]), axis=-1) / n
    k = grid.rfft_wavenumbers[1:-1]
    phases = np.exp(2j * np.pi * np.multiply.outer(points, k))
    interior = 2.0 * (spectra[:, 1:-1] @ phases.T).real
    nyquist = np.multiply.outer(spectra[:, -1].real, np.cos(np.pi * n * points))
    return spectra[:, :1].real + interior + nyquist


def interpolate_many(f: RealField, xs: Sequence[float] | np.ndarray) -> np.ndarray:
    """Trigonometric interpolant of ``f`` evaluated at arbitrary points."""

    return interpolate_fields([f], xs)[0]


def interpolate(f: RealField, x: float) -> float:
    return float(interpolate_many(f, np.array([x]))[0])


def spectral_tail(f: RealField, *, dealias: bool = True) -> float:
    """Share of ``sum_k |f_k|`` held by the top third of the retained band.

    The band is ``1 <= k < n/3`` with dealiasing and stops below the Nyquist
    mode without. Small values mean the grid still resolves ``f``.
    """

    magnitudes = np.abs(np.fft.rfft(f.values))[1:-1]
    k = f.grid.rfft_wavenumbers[1:-1]
    top = f.grid.n / 3.0 if dealias else f.grid.n / 2.0
    band = k < top
    total = float(magnitudes[band].sum())
    if total == 0.0:
        return 0.0
    return float(magnitudes[band & (k >= 2.0 * top / 3.0)].sum() / total)


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

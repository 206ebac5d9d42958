"""Second-order finite-difference twin of the spectral solver.

Only used to cross-check the spectral kernel, so nothing here touches
:mod:`hssim.spectral` or :mod:`hssim.evolution`'s right-hand side: derivatives
are central differences, the antiderivative is a cumulative trapezoid rule
pinned at ``x = 0`` and time stepping is fixed-step RK4. Stability of the
chosen ``dt`` is the caller's responsibility; ``dt <= 0.3 * dx / max|u|``
together with ``dt <= 0.3 / max|u_x|`` is a safe choice.
"""

from __future__ import annotations

import logging
import math

import numpy as np

from ..core.types import RealField, SimState, SystemParams
from ..evolution.stepper import NumericalBreakdown

LOGGER = logging.getLogger(__name__)


def _central(values: np.ndarray, dx: float) -> np.ndarray:
    return (np.roll(values, -1) - np.roll(values, 1)) / (2.0 * dx)


def _cumulative_trapezoid(values: np.ndarray, dx: float) -> np.ndarray:
    # F(x_0) = 0, F(x_j) = sum over the first j panels
    panels = 0.5 * dx * (values[:-1] + values[1:])
    return np.concatenate(([0.0], np.cumsum(panels)))


def _rates(
    t: float, u: np.ndarray, rho: np.ndarray, params: SystemParams, dx: float
) -> tuple[np.ndarray, np.ndarray]:
    u_x = _central(u, dx)
    rho_x = _central(rho, dx)
    quadratic = 0.5 * params.kappa * rho**2 + 0.5 * (params.alpha + 2.0) * u_x**2
    # the periodic trapezoid rule on a uniform grid is the arithmetic mean
    a = -float(np.mean(quadratic))
    du = -u * u_x + _cumulative_trapezoid(quadratic + a, dx) + params.gauge(t)
    drho = params.alpha * u_x * rho - u * rho_x
    return du, drho


def fd_rhs(state: SimState, params: SystemParams) -> tuple[RealField, RealField]:
    """Finite-difference time derivative of ``(u, rho)``."""

    grid = state.grid
    du, drho = _rates(state.t, state.u.values, state.rho.values, params, grid.spacing)
    return RealField(grid, du), RealField(grid, drho)


def fd_run(initial: SimState, params: SystemParams, dt: float, horizon: float) -> SimState:
    """Integrate with fixed-step RK4 up to ``horizon`` (the last step is shortened to land on it)."""

    if dt <= 0.0 or not math.isfinite(dt):
        raise ValueError(f"dt must be positive and finite, got {dt}")
    if horizon < 0.0:
        raise ValueError(f"horizon must be non-negative, got {horizon}")
    grid = initial.grid
    dx = grid.spacing
    t = initial.t
    end = initial.t + horizon
    u = np.array(initial.u.values, dtype=np.float64)
    rho = np.array(initial.rho.values, dtype=np.float64)
    steps = 0
    while end - t > 1e-14 * max(1.0, end):
        h = min(dt, end - t)
        k1u, k1r = _rates(t, u, rho, params, dx)
        k2u, k2r = _rates(t + 0.5 * h, u + 0.5 * h * k1u, rho + 0.5 * h * k1r, params, dx)
        k3u, k3r = _rates(t + 0.5 * h, u + 0.5 * h * k2u, rho + 0.5 * h * k2r, params, dx)
        k4u, k4r = _rates(t + h, u + h * k3u, rho + h * k3r, params, dx)
        u = u + h / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u)
        rho = rho + h / 6.0 * (k1r + 2.0 * k2r + 2.0 * k3r + k4r)
        t += h
        steps += 1
        if not (np.all(np.isfinite(u)) and np.all(np.isfinite(rho))):
            raise NumericalBreakdown(f"Finite-difference solution became non-finite at t={t:.6g}")
    LOGGER.debug("Finite-difference run finished after %d steps at t=%.6g", steps, t)
    if steps == 0:
        return initial
    return initial.advanced(end, RealField(grid, u), RealField(grid, rho))


__all__ = ["fd_rhs", "fd_run"]

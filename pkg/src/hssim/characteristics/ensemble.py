"""Lagrangian particles carried by the Eulerian solution.

Each particle solves ``phi' = u(t, phi)`` together with the Jacobian equation
``phi_x' = u_x(t, phi) phi_x`` and the running integral ``L' = u_x(t, phi)``,
so that ``phi_x = exp(L)`` is available as an independent cross-check.
Between two accepted Eulerian steps the velocity is reconstructed in time,
linearly from the two end states or, when the time derivatives ``u_t`` at both
ends are known, with the cubic Hermite interpolant.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence
import logging

import numpy as np

from ..core.types import RealField, SimState, SystemParams
from ..evolution import StepEvent, rhs
from ..spectral import derivative, interpolate_fields

LOGGER = logging.getLogger(__name__)

_TIME_TOL = 1e-12


class InterpolationOutOfSync(RuntimeError):
    """Raised when an ensemble is advanced with a state from a different time."""


@dataclass(frozen=True, slots=True, eq=False)
class CharacteristicEnsemble:
    """Particle positions, Jacobians and along-flow samples at time ``t``.

    ``phi`` is stored unwrapped (``phi(0) = seeds``); ``positions`` reduces it
    modulo one. ``M``, ``gamma``, ``N`` and ``varpi`` are ``u_x``, ``rho``,
    ``u_xx`` and ``rho_x`` evaluated at the particles.
    """

    t: float
    seeds: np.ndarray
    phi: np.ndarray
    phi_x: np.ndarray
    log_jacobian: np.ndarray
    M: np.ndarray
    gamma: np.ndarray
    N: np.ndarray
    varpi: np.ndarray

    @property
    def positions(self) -> np.ndarray:
        return np.mod(self.phi, 1.0)

    @property
    def size(self) -> int:
        return int(self.seeds.size)

    @classmethod
    def seeded(cls, state: SimState, seeds: Optional[Sequence[float] | np.ndarray] = None) -> "CharacteristicEnsemble":
        """Start particles at ``seeds`` (default: the grid nodes) at the state's time."""

        if seeds is None:
            points = state.grid.points
            samples = np.stack([f.values for f in _sampled_fields(state)])
        else:
            points = np.mod(np.asarray(seeds, dtype=np.float64).ravel(), 1.0)
            samples = interpolate_fields(_sampled_fields(state), points)
        return cls(
            t=state.t,
            seeds=points.copy(),
            phi=points.copy(),
            phi_x=np.ones_like(points),
            log_jacobian=np.zeros_like(points),
            M=samples[0],
            gamma=samples[1],
            N=samples[2],
            varpi=samples[3],
        )


def _sampled_fields(state: SimState) -> list[RealField]:
    u_x = derivative(state.u)
    return [u_x, state.rho, derivative(u_x), derivative(state.rho)]


def advect(
    ensemble: CharacteristicEnsemble,
    state: SimState,
    next_state: SimState,
    *,
    rates: Optional[tuple[RealField, RealField]] = None,
) -> CharacteristicEnsemble:
    """Advance the particles from ``state.t`` to ``next_state.t`` with one RK4 step.

    ``rates`` are ``u_t`` at the two states; with them the mid-step velocity is
    the Hermite value and the particle paths stay fourth-order accurate.
    """

    if abs(ensemble.t - state.t) > _TIME_TOL * max(1.0, abs(state.t)):
        raise InterpolationOutOfSync(f"Ensemble at t={ensemble.t} cannot be advanced from a state at t={state.t}")
    dt = next_state.t - state.t
    if dt < 0:
        raise InterpolationOutOfSync(f"Next state at t={next_state.t} precedes t={state.t}")

    u_start, u_end = state.u, next_state.u
    slope_start, slope_end = derivative(u_start), derivative(u_end)
    u_mid = (u_start + u_end) * 0.5
    if rates is None:
        slope_mid = (slope_start + slope_end) * 0.5
    else:
        u_mid = u_mid + (rates[0] - rates[1]) * (dt / 8.0)
        slope_mid = derivative(u_mid)

    def velocity(u: RealField, slope: RealField, phi: np.ndarray, jacobian: np.ndarray) -> tuple[np.ndarray, ...]:
        v, m = interpolate_fields([u, slope], np.mod(phi, 1.0))
        return v, m * jacobian, m

    y = (ensemble.phi, ensemble.phi_x, ensemble.log_jacobian)

    def shifted(k: tuple[np.ndarray, ...], weight: float) -> tuple[np.ndarray, ...]:
        return tuple(base + weight * rate for base, rate in zip(y, k))

    k1 = velocity(u_start, slope_start, y[0], y[1])
    s2 = shifted(k1, 0.5 * dt)
    k2 = velocity(u_mid, slope_mid, s2[0], s2[1])
    s3 = shifted(k2, 0.5 * dt)
    k3 = velocity(u_mid, slope_mid, s3[0], s3[1])
    s4 = shifted(k3, dt)
    k4 = velocity(u_end, slope_end, s4[0], s4[1])
    phi, phi_x, log_jacobian = (
        base + dt / 6.0 * (a + 2.0 * b + 2.0 * c + d) for base, a, b, c, d in zip(y, k1, k2, k3, k4)
    )

    samples = interpolate_fields(_sampled_fields(next_state), np.mod(phi, 1.0))
    return CharacteristicEnsemble(
        t=next_state.t,
        seeds=ensemble.seeds,
        phi=phi,
        phi_x=phi_x,
        log_jacobian=log_jacobian,
        M=samples[0],
        gamma=samples[1],
        N=samples[2],
        varpi=samples[3],
    )


def resolved_history(
    history: Sequence[CharacteristicEnsemble], until: Optional[float]
) -> list[CharacteristicEnsemble]:
    """Entries recorded strictly before ``until``; the initial ensemble is always kept."""

    if until is None:
        return list(history)
    kept = [ensemble for ensemble in history if ensemble.t < until]
    return kept or list(history[:1])


class CharacteristicTracker:
    """Run observer that advects an ensemble alongside the Eulerian solve.

    ``every`` thins the stored history; the ensemble itself is advanced after
    every accepted step. Tracking stops at blow-up or breakdown. Passing
    ``params`` enables the Hermite velocity reconstruction.
    """

    def __init__(
        self,
        *,
        seeds: Optional[Sequence[float] | np.ndarray] = None,
        every: int = 1,
        params: Optional[SystemParams] = None,
    ) -> None:
        self._seeds = seeds
        self._every = max(1, every)
        self._params = params
        self._last_state: Optional[SimState] = None
        self._last_rate: Optional[RealField] = None
        self.current: Optional[CharacteristicEnsemble] = None
        self.history: list[CharacteristicEnsemble] = []

    def __call__(self, event: StepEvent) -> None:
        if event.kind == "start":
            self.current = CharacteristicEnsemble.seeded(event.state, self._seeds)
            self.history = [self.current]
            self._last_state = event.state
            self._last_rate = self._rate(event.state)
            return
        if event.kind != "step" or self.current is None or self._last_state is None:
            return
        rate = self._rate(event.state)
        rates = (self._last_rate, rate) if self._last_rate is not None and rate is not None else None
        self.current = advect(self.current, self._last_state, event.state, rates=rates)
        self._last_state = event.state
        self._last_rate = rate
        if event.step % self._every == 0:
            self.history.append(self.current)

    def _rate(self, state: SimState) -> Optional[RealField]:
        if self._params is None:
            return None
        return rhs(state, self._params)[0]

    def finalize(self) -> None:
        """Make sure the latest ensemble is part of the history."""

        if self.current is not None and (not self.history or self.history[-1] is not self.current):
            self.history.append(self.current)


__all__ = [
    "CharacteristicEnsemble",
    "CharacteristicTracker",
    "InterpolationOutOfSync",
    "advect",
    "resolved_history",
]

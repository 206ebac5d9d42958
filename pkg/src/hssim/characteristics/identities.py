"""Checks that hold along particle trajectories."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal, Sequence
import logging

import numpy as np
from scipy.integrate import cumulative_trapezoid

from ..core.types import SimState, SystemParams
from ..evolution import StepEvent
from .ensemble import CharacteristicEnsemble

LOGGER = logging.getLogger(__name__)

AuxiliaryKind = Literal["W_alpha_minus1", "Wtilde_alpha0"]


class SignConditionError(ValueError):
    """Raised when the initial density changes sign across the seeds."""


def check_transport_identity(
    ensemble: CharacteristicEnsemble,
    rho0_at_seeds: Sequence[float] | np.ndarray,
    alpha: float,
) -> float:
    """Largest ``|gamma(t) * phi_x(t)**(-alpha) - gamma(0)|`` over the particles.

    For ``alpha = -1`` this is ``|rho(t, phi) phi_x - rho0|``.
    """

    rho0 = np.asarray(rho0_at_seeds, dtype=np.float64)
    if rho0.shape != ensemble.gamma.shape:
        raise ValueError(f"Expected {ensemble.size} seed values, got {rho0.size}")
    if ensemble.size == 0:
        return 0.0
    return float(np.max(np.abs(ensemble.gamma * ensemble.phi_x ** (-alpha) - rho0)))


def exponential_jacobian_gap(ensemble: CharacteristicEnsemble) -> float:
    """Relative gap between ``phi_x`` and ``exp`` of the integrated slope."""

    if ensemble.size == 0:
        return 0.0
    reference = np.exp(ensemble.log_jacobian)
    return float(np.max(np.abs(ensemble.phi_x - reference) / reference))


@dataclass(frozen=True, slots=True)
class OrientationCheck:
    min_jacobian: float
    ordered: bool

    @property
    def passed(self) -> bool:
        return self.ordered and self.min_jacobian > 0.0


def check_orientation(history: Sequence[CharacteristicEnsemble]) -> OrientationCheck:
    """Positive Jacobians and cyclic ordering of the seed images at every recorded time."""

    min_jacobian = np.inf
    ordered = True
    for ensemble in history:
        if ensemble.size == 0:
            continue
        min_jacobian = min(min_jacobian, float(np.min(ensemble.phi_x)))
        lifted = ensemble.phi[np.argsort(ensemble.seeds, kind="stable")]
        if ensemble.size > 1:
            if np.any(np.diff(lifted) <= 0.0) or lifted[-1] - lifted[0] >= 1.0:
                ordered = False
    return OrientationCheck(min_jacobian=float(min_jacobian), ordered=ordered)


@dataclass(slots=True, eq=False)
class AuxiliaryMonitor:
    """Auxiliary function per time (rows) and particle (columns) with its growth envelope."""

    kind: AuxiliaryKind
    times: np.ndarray
    values: np.ndarray
    envelope: np.ndarray
    worst_ratio: float
    bound: float


def _forcing_integral(times: np.ndarray, a_history: tuple[np.ndarray, np.ndarray]) -> np.ndarray:
    a_times, a_values = (np.asarray(part, dtype=np.float64) for part in a_history)
    if a_times.size == 0:
        raise ValueError("Forcing history is empty")
    # running integral of |a| evaluated at the ensemble times
    if a_times.size == 1:
        return np.abs(a_values[0]) * (times - times[0])
    running = cumulative_trapezoid(np.abs(a_values), a_times, initial=0.0)
    return np.interp(times, a_times, running) - np.interp(times[0], a_times, running)


def monitor_auxiliary(
    history: Sequence[CharacteristicEnsemble],
    params: SystemParams,
    a_history: tuple[np.ndarray, np.ndarray],
) -> AuxiliaryMonitor:
    """Evaluate ``w`` (alpha = -1) or ``w~`` (alpha = 0) along the recorded history.

    ``a_history`` is a ``(times, a)`` pair, e.g. from
    :meth:`~hssim.analysis.ConservationMonitor.a_history`. The reported
    ``worst_ratio`` is ``max w(t, x) / (w(0, x) * envelope(t))``; a value at or
    below one certifies the Gronwall bound.
    """

    if not history:
        raise ValueError("Cannot monitor an empty characteristic history")
    first = history[0]
    gamma0 = first.gamma
    times = np.array([ensemble.t for ensemble in history], dtype=np.float64)
    forcing = _forcing_integral(times, a_history)
    elapsed = times - times[0]

    if params.alpha == -1.0:
        if params.kappa <= 0.0:
            raise ValueError(f"W_alpha_minus1 needs kappa > 0, got {params.kappa}")
        if not (np.all(gamma0 > 0.0) or np.all(gamma0 < 0.0)):
            raise SignConditionError("Initial density must be strictly positive or strictly negative at every seed")
        kind: AuxiliaryKind = "W_alpha_minus1"
        values = np.stack(
            [params.kappa * gamma0 * e.gamma + (gamma0 / e.gamma) * (1.0 + e.M**2) for e in history]
        )
        envelope = np.exp(elapsed + 2.0 * forcing)[:, None] * np.ones_like(gamma0)[None, :]
    elif params.alpha == 0.0:
        kind = "Wtilde_alpha0"
        values = np.stack([params.kappa * gamma0**2 + 1.0 + e.M**2 for e in history])
        envelope = np.exp(0.5 * params.kappa * np.outer(elapsed, gamma0**2) + forcing[:, None])
    else:
        raise ValueError(f"No auxiliary function is available for alpha={params.alpha}")

    ratios = values / (values[0][None, :] * envelope)
    worst = float(np.max(ratios)) if ratios.size else 1.0
    if worst > 1.0 + 1e-6:
        LOGGER.warning("Auxiliary function %s exceeded its envelope (ratio %.6g)", kind, worst)
    return AuxiliaryMonitor(
        kind=kind,
        times=times,
        values=values,
        envelope=envelope,
        worst_ratio=worst,
        bound=float(np.max(envelope[-1])) if envelope.size else 1.0,
    )


def rho_sup_bound(
    times: Sequence[float] | np.ndarray,
    rho_sup: Sequence[float] | np.ndarray,
    min_slope: Sequence[float] | np.ndarray,
) -> float:
    """Worst ratio ``||rho(t)|| / (exp(M1 t) ||rho0||)`` with ``M1 = max(0, -min_{s<=t} inf u_x)``.

    Valid for ``alpha = -1``.
    """

    t = np.asarray(times, dtype=np.float64)
    sup = np.asarray(rho_sup, dtype=np.float64)
    slopes = np.asarray(min_slope, dtype=np.float64)
    if t.size == 0 or sup[0] == 0.0:
        return 0.0
    decay = np.maximum(0.0, -np.minimum.accumulate(slopes))
    return float(np.max(sup / (np.exp(decay * (t - t[0])) * sup[0])))


def slope_ode_residual(
    history: Sequence[CharacteristicEnsemble],
    params: SystemParams,
    a_history: tuple[np.ndarray, np.ndarray],
) -> float:
    """Relative residual of ``M' = (alpha/2) M^2 + (kappa/2) gamma^2 + a`` by centred differences."""

    kept: list[CharacteristicEnsemble] = []
    for ensemble in history:
        if not kept or ensemble.t > kept[-1].t:
            kept.append(ensemble)
    if len(kept) < 3:
        return 0.0
    times = np.array([e.t for e in kept])
    slopes = np.stack([e.M for e in kept])
    gamma = np.stack([e.gamma for e in kept])
    a_times, a_values = (np.asarray(part, dtype=np.float64) for part in a_history)
    forcing = np.interp(times, a_times, a_values)
    observed = np.gradient(slopes, times, axis=0)[1:-1]
    predicted = (0.5 * params.alpha * slopes**2 + 0.5 * params.kappa * gamma**2 + forcing[:, None])[1:-1]
    scale = max(1.0, float(np.max(np.abs(predicted))))
    return float(np.max(np.abs(observed - predicted)) / scale)


@dataclass(slots=True, eq=False)
class OriginSlopeSeries:
    """``zeta(t) = u_x(t, 0)`` and the symmetry diagnostics of a run."""

    times: np.ndarray
    zeta: np.ndarray
    rho_origin: np.ndarray
    odd_residual: np.ndarray
    even_residual: np.ndarray


def _origin_row(state: SimState) -> tuple[float, float, float, float, float]:
    return (
        state.t,
        state.u_x.at_origin(),
        state.rho.at_origin(),
        (state.u + state.u.mirrored()).max_abs(),
        (state.rho - state.rho.mirrored()).max_abs(),
    )


def _series(rows: list[tuple[float, float, float, float, float]]) -> OriginSlopeSeries:
    table = np.asarray(rows, dtype=np.float64).reshape(-1, 5)
    return OriginSlopeSeries(*(table[:, column].copy() for column in range(5)))


def track_origin_slope(states: Sequence[SimState]) -> OriginSlopeSeries:
    return _series([_origin_row(state) for state in states])


class OriginSlopeTracker:
    """Run observer that records :func:`track_origin_slope` rows on the fly."""

    def __init__(self) -> None:
        self._rows: list[tuple[float, float, float, float, float]] = []

    def __call__(self, event: StepEvent) -> None:
        if event.kind in ("start", "step"):
            self._rows.append(_origin_row(event.state))

    def series(self) -> OriginSlopeSeries:
        return _series(self._rows)


__all__ = [
    "AuxiliaryKind",
    "AuxiliaryMonitor",
    "OrientationCheck",
    "OriginSlopeSeries",
    "OriginSlopeTracker",
    "SignConditionError",
    "check_orientation",
    "check_transport_identity",
    "exponential_jacobian_gap",
    "monitor_auxiliary",
    "rho_sup_bound",
    "slope_ode_residual",
    "track_origin_slope",
]

"""Time integration of the integrated two-component system.

The evolved form is

    u_t + u u_x = d_x^{-1}( (kappa/2) rho^2 + ((alpha+2)/2) u_x^2 + a(t) ) + h(t)
    rho_t + u rho_x = alpha u_x rho

with ``a(t)`` recomputed inside every right-hand side evaluation so that the
integrand stays mean-free.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from threading import Event
from typing import TYPE_CHECKING, Callable, Iterable, Literal, Optional
import logging

import numpy as np

from ..core.types import RealField, SimState, SystemParams
from ..spectral import NonZeroMeanError, TOL_MEAN, antiderivative, derivative, product, spectral_tail

if TYPE_CHECKING:  # pragma: no cover - imported for typing only
    from ..analysis.blowup import BlowupFit

LOGGER = logging.getLogger(__name__)

_EPS = 1e-12

RunStatus = Literal["CompletedHorizon", "BlowUpDetected", "NumericalBreakdown", "Cancelled"]
StepEventKind = Literal["start", "step", "finished", "blowup", "breakdown", "cancelled"]


class NumericalBreakdown(RuntimeError):
    """Raised when the discrete solution stops being finite or consistent."""


@dataclass(frozen=True, slots=True)
class StepControl:
    """Adaptive step-size control and blow-up triggers."""

    cfl: float = 0.3
    dt_min: float = 1e-9
    dt_max: float = 1e-2
    slope_floor: float = -1e6
    fixed_dt: Optional[float] = None
    persistence_threshold: Optional[float] = None
    resolution_tol: Optional[float] = None
    halt_on_resolution_loss: bool = False

    def __post_init__(self) -> None:
        if not 0.0 < self.cfl <= 1.0:
            raise ValueError(f"cfl must lie in (0, 1], got {self.cfl}")
        if not 0.0 < self.dt_min < self.dt_max:
            raise ValueError(f"Need 0 < dt_min < dt_max, got dt_min={self.dt_min}, dt_max={self.dt_max}")
        if self.slope_floor >= 0.0:
            raise ValueError(f"slope_floor must be negative, got {self.slope_floor}")
        if self.fixed_dt is not None and self.fixed_dt <= 0.0:
            raise ValueError(f"fixed_dt must be positive, got {self.fixed_dt}")
        if self.resolution_tol is not None and not 0.0 < self.resolution_tol < 1.0:
            raise ValueError(f"resolution_tol must lie in (0, 1), got {self.resolution_tol}")
        if self.halt_on_resolution_loss and self.resolution_tol is None:
            raise ValueError("halt_on_resolution_loss needs a resolution_tol")


@dataclass(frozen=True, slots=True)
class StepEvent:
    """Notification passed to run observers; ``state`` is read-only."""

    kind: StepEventKind
    step: int
    state: SimState
    dt: float = 0.0
    message: str | None = None


Observer = Callable[[StepEvent], None]


@dataclass(slots=True, eq=False)
class RunOutcome:
    """Result of :func:`run`."""

    status: RunStatus
    t_final: float
    final_state: SimState
    steps: int
    blowup_estimate: "BlowupFit | None" = None
    min_slope: float = float("nan")
    persistence_max: float = 0.0
    persistence_exceeded: bool = False
    slope_times: np.ndarray = field(default_factory=lambda: np.zeros(0))
    slope_values: np.ndarray = field(default_factory=lambda: np.zeros(0))
    resolution_lost_at: Optional[float] = None
    message: str | None = None


def _quadratic_terms(state: SimState, params: SystemParams, u_x: RealField) -> tuple[RealField, RealField]:
    rho_sq = product(state.rho, state.rho, dealias=params.dealias)
    slope_sq = product(u_x, u_x, dealias=params.dealias)
    return rho_sq, slope_sq


def compute_a(state: SimState, params: SystemParams) -> float:
    """``a = -(kappa/2) int rho^2 - ((alpha+2)/2) int u_x^2`` over the unit circle."""

    rho_sq, slope_sq = _quadratic_terms(state, params, derivative(state.u))
    return -0.5 * params.kappa * rho_sq.mean() - 0.5 * (params.alpha + 2.0) * slope_sq.mean()


def rhs(state: SimState, params: SystemParams) -> tuple[RealField, RealField]:
    """Time derivatives ``(u_t, rho_t)`` of the integrated system."""

    u, rho = state.u, state.rho
    u_x = derivative(u)
    rho_x = derivative(rho)
    rho_sq, slope_sq = _quadratic_terms(state, params, u_x)
    a = -0.5 * params.kappa * rho_sq.mean() - 0.5 * (params.alpha + 2.0) * slope_sq.mean()
    integrand = rho_sq * (0.5 * params.kappa) + slope_sq * (0.5 * (params.alpha + 2.0)) + a
    # rounding in the quadrature scales with the size of the quadratic terms
    scale = max(1.0, integrand.max_abs(), abs(a))
    du_dt = antiderivative(integrand, tol_mean=TOL_MEAN * scale) - product(u, u_x, dealias=params.dealias)
    du_dt = du_dt + params.gauge(state.t)
    drho_dt = product(u_x, rho, dealias=params.dealias) * params.alpha - product(u, rho_x, dealias=params.dealias)
    return du_dt, drho_dt


def raw_dt(state: SimState, control: StepControl) -> float:
    """Unclamped CFL proposal ``cfl * min(dx / |u|_inf, 1 / |u_x|_inf)``."""

    advective = state.grid.spacing / (state.u.max_abs() + _EPS)
    stretching = 1.0 / (derivative(state.u).max_abs() + _EPS)
    return control.cfl * min(advective, stretching)


def propose_dt(state: SimState, control: StepControl) -> float:
    if control.fixed_dt is not None:
        return control.fixed_dt
    return float(np.clip(raw_dt(state, control), control.dt_min, control.dt_max))


def step(
    state: SimState,
    params: SystemParams,
    control: StepControl,
    *,
    dt: float | None = None,
) -> SimState:
    """Advance ``state`` by one classical RK4 step."""

    if not state.is_finite():
        raise NumericalBreakdown(f"Non-finite state at t={state.t}")
    h = propose_dt(state, control) if dt is None else dt
    t = state.t

    def stage(base: SimState, k: tuple[RealField, RealField], weight: float) -> SimState:
        return SimState(t + weight, base.u + k[0] * weight, base.rho + k[1] * weight)

    try:
        k1 = rhs(state, params)
        k2 = rhs(stage(state, k1, 0.5 * h), params)
        k3 = rhs(stage(state, k2, 0.5 * h), params)
        k4 = rhs(stage(state, k3, h), params)
    except NonZeroMeanError as exc:
        raise NumericalBreakdown(f"Inconsistent integration constant at t={t}: {exc}") from exc
    u = state.u + (k1[0] + k2[0] * 2.0 + k3[0] * 2.0 + k4[0]) * (h / 6.0)
    rho = state.rho + (k1[1] + k2[1] * 2.0 + k3[1] * 2.0 + k4[1]) * (h / 6.0)
    advanced = state.advanced(t + h, u, rho)
    if not advanced.is_finite():
        raise NumericalBreakdown(f"Non-finite state after step t={t} -> {t + h}")
    return advanced


def persistence_quantity(state: SimState) -> float:
    """``|u_x|_inf + |rho|_inf + |rho_x|_inf``, the quantity bounded in the persistence criterion."""

    return derivative(state.u).max_abs() + state.rho.max_abs() + derivative(state.rho).max_abs()


def resolution_indicator(state: SimState, params: SystemParams) -> float:
    """Worse of the spectral tails of ``u_x`` and ``rho`` on the retained band."""

    return max(
        spectral_tail(derivative(state.u), dealias=params.dealias),
        spectral_tail(state.rho, dealias=params.dealias),
    )


def run(
    initial: SimState,
    params: SystemParams,
    control: StepControl,
    horizon: float,
    observers: Iterable[Observer] = (),
    *,
    cancel_event: Optional[Event] = None,
) -> RunOutcome:
    """Integrate from ``initial`` until the horizon, a blow-up trigger or breakdown."""

    observers = tuple(observers)
    state = initial
    steps = 0
    slope_times = [state.t]
    slope_values = [derivative(state.u).min()]
    persistence_max = persistence_quantity(state)
    persistence_exceeded = False
    resolution_lost_at: Optional[float] = None
    status: RunStatus = "CompletedHorizon"
    message: str | None = None

    _notify(observers, StepEvent(kind="start", step=0, state=state, message="Run started"))
    LOGGER.info("Run started: alpha=%s kappa=%s n=%s horizon=%s", params.alpha, params.kappa, state.grid.n, horizon)

    while state.t < horizon:
        if cancel_event and cancel_event.is_set():
            status = "Cancelled"
            message = f"Cancelled at t={state.t}"
            break
        if control.fixed_dt is None and raw_dt(state, control) < control.dt_min:
            status = "BlowUpDetected"
            message = f"Time step pinned at dt_min={control.dt_min} at t={state.t}"
            break
        dt = min(propose_dt(state, control), horizon - state.t)
        try:
            state = step(state, params, control, dt=dt)
        except NumericalBreakdown as exc:
            status = "NumericalBreakdown"
            message = str(exc)
            LOGGER.warning("Numerical breakdown: %s", exc)
            break
        steps += 1
        slope = derivative(state.u).min()
        slope_times.append(state.t)
        slope_values.append(slope)
        persistence = persistence_quantity(state)
        persistence_max = max(persistence_max, persistence)
        if (
            control.persistence_threshold is not None
            and persistence > control.persistence_threshold
            and not persistence_exceeded
        ):
            persistence_exceeded = True
            LOGGER.warning(
                "Persistence quantity %.3e exceeds threshold %.3e at t=%.6f",
                persistence,
                control.persistence_threshold,
                state.t,
            )
        _notify(observers, StepEvent(kind="step", step=steps, state=state, dt=dt))
        if control.resolution_tol is not None and resolution_lost_at is None:
            tail = resolution_indicator(state, params)
            if tail > control.resolution_tol:
                resolution_lost_at = state.t
                LOGGER.warning(
                    "Spectral tail %.3e exceeds %.1e at t=%.6f; the grid no longer resolves the solution",
                    tail,
                    control.resolution_tol,
                    state.t,
                )
                if control.halt_on_resolution_loss:
                    status = "BlowUpDetected"
                    message = f"resolution lost at t={state.t} with min u_x={slope:.6e}"
                    break
        if slope <= control.slope_floor:
            status = "BlowUpDetected"
            message = f"min u_x={slope:.6e} reached slope floor {control.slope_floor:.1e} at t={state.t}"
            break
        if horizon - state.t <= 1e-14 * max(1.0, horizon):
            break

    times = np.asarray(slope_times)
    values = np.asarray(slope_values)
    estimate = None
    if status == "BlowUpDetected":
        resolved = times < resolution_lost_at if resolution_lost_at is not None else np.ones(times.size, dtype=bool)
        estimate = _estimate_blowup(times[resolved], values[resolved])
        if estimate is None:
            status = "NumericalBreakdown"
            message = f"{message}; slope never diverged to -infinity"
        else:
            LOGGER.info("Blow-up detected: %s (T0 estimate %.6f)", message, estimate.T0_est)

    final_kind: StepEventKind = {
        "CompletedHorizon": "finished",
        "BlowUpDetected": "blowup",
        "NumericalBreakdown": "breakdown",
        "Cancelled": "cancelled",
    }[status]
    _notify(observers, StepEvent(kind=final_kind, step=steps, state=state, message=message))
    LOGGER.info("Run finished with status %s at t=%.6f after %s steps", status, state.t, steps)
    return RunOutcome(
        status=status,
        t_final=state.t,
        final_state=state,
        steps=steps,
        blowup_estimate=estimate,
        min_slope=float(values.min()),
        persistence_max=persistence_max,
        persistence_exceeded=persistence_exceeded,
        slope_times=times,
        slope_values=values,
        resolution_lost_at=resolution_lost_at,
        message=message,
    )


def _estimate_blowup(times: np.ndarray, slopes: np.ndarray) -> "BlowupFit | None":
    from ..analysis.blowup import InsufficientAsymptotics, fit_blowup

    try:
        return fit_blowup(times, slopes)
    except InsufficientAsymptotics:
        pass
    lowest = float(slopes.min())
    if lowest >= 0.0:
        return None
    LOGGER.warning("Slope only reached %.3e; fitting blow-up time from the tail below %.3e", lowest, 0.5 * lowest)
    try:
        return fit_blowup(times, slopes, threshold=0.5 * lowest, model="odd-cubic")
    except InsufficientAsymptotics:
        return None


def _notify(observers: tuple[Observer, ...], event: StepEvent) -> None:
    for observer in observers:
        observer(event)


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

"""Closed-form and numerical solutions of the slope equation at a symmetry point.

At a point where ``u`` is odd and ``rho`` is even with ``rho(t, 0) = 0`` the
slope ``zeta(t) = u_x(t, 0)`` obeys ``zeta' = (alpha/2) zeta^2 + a(t)``; for
``alpha = -1`` and constant ``a`` this is solvable in closed form.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Literal, Optional, Sequence
import logging
import math

import numpy as np
from scipy.integrate import solve_ivp

LOGGER = logging.getLogger(__name__)

RiccatiForm = Literal["ZeroForcing", "NegHalfForcing", "GeneralConstant"]
ForcingSeries = Callable[[float], float]

_FORM_TOL = 1e-12


class RiccatiDomainError(ValueError):
    """Raised when a closed form is evaluated at or after the blow-up time."""


def _acoth(y: float) -> float:
    return 0.5 * math.log((y + 1.0) / (y - 1.0))


def classify_forcing(a: float) -> RiccatiForm:
    if abs(a) <= _FORM_TOL:
        return "ZeroForcing"
    if abs(a + 0.5) <= _FORM_TOL:
        return "NegHalfForcing"
    return "GeneralConstant"


@dataclass(frozen=True, slots=True)
class RiccatiSolution:
    """Solution of ``zeta' = -zeta^2/2 + a`` with ``zeta(0) = zeta0`` and constant ``a``."""

    zeta0: float
    a: float
    form: RiccatiForm
    T0: float

    def __post_init__(self) -> None:
        if self.form == "ZeroForcing" and abs(self.a) > _FORM_TOL:
            raise ValueError(f"ZeroForcing requires a = 0, got {self.a}")
        if self.form == "NegHalfForcing" and abs(self.a + 0.5) > _FORM_TOL:
            raise ValueError(f"NegHalfForcing requires a = -1/2, got {self.a}")

    @classmethod
    def solve(cls, zeta0: float, a: float) -> "RiccatiSolution":
        form = classify_forcing(a)
        return cls(zeta0=float(zeta0), a=float(a), form=form, T0=blowup_time(zeta0, a))

    def value(self, t: float | np.ndarray) -> float | np.ndarray:
        times = np.asarray(t, dtype=np.float64)
        if np.any(times >= self.T0):
            raise RiccatiDomainError(f"Closed form undefined for t >= T0 = {self.T0}")
        zeta0, a = self.zeta0, self.a
        if self.form == "ZeroForcing":
            result = 2.0 * zeta0 / (2.0 + zeta0 * times)
        elif self.form == "NegHalfForcing":
            result = np.tan(np.arctan(zeta0) - 0.5 * times)
        elif a < 0.0:
            c = math.sqrt(-2.0 * a)
            result = c * np.tan(np.arctan(zeta0 / c) - 0.5 * c * times)
        else:
            c = math.sqrt(2.0 * a)
            if abs(zeta0) == c:
                result = np.full_like(times, zeta0)
            elif abs(zeta0) < c:
                result = c * np.tanh(0.5 * c * times + np.arctanh(zeta0 / c))
            else:
                result = c / np.tanh(0.5 * c * times + _acoth(zeta0 / c))
        return float(result) if np.ndim(result) == 0 else result


def blowup_time(zeta0: float, a: float) -> float:
    """Blow-up time of ``zeta' = -zeta^2/2 + a``; ``inf`` when the solution stays finite."""

    if abs(a) <= _FORM_TOL:
        return -2.0 / zeta0 if zeta0 < 0.0 else math.inf
    if a < 0.0:
        c = math.sqrt(-2.0 * a)
        return (2.0 / c) * (0.5 * math.pi + math.atan(zeta0 / c))
    c = math.sqrt(2.0 * a)
    if zeta0 < -c:
        return math.log((zeta0 - c) / (zeta0 + c)) / c
    return math.inf


def riccati_exact(zeta0: float, a: float, t: float | np.ndarray) -> float | np.ndarray:
    """Closed-form slope ``zeta(t)`` for constant forcing ``a``."""

    return RiccatiSolution.solve(zeta0, a).value(t)


@dataclass(slots=True, eq=False)
class RiccatiSeries:
    """Output of :func:`riccati_numeric`."""

    times: np.ndarray
    zeta: np.ndarray
    blew_up: bool
    t_blowup: Optional[float] = None
    _dense: Optional[Callable[[np.ndarray], np.ndarray]] = field(default=None, repr=False)

    def evaluate(self, t: float | np.ndarray) -> float | np.ndarray:
        if self._dense is None:
            return np.interp(t, self.times, self.zeta)
        result = self._dense(np.asarray(t, dtype=np.float64))[0]
        return float(result) if np.ndim(result) == 0 else result


def riccati_numeric(
    zeta0: float,
    a_series: ForcingSeries | float,
    horizon: float,
    *,
    alpha: float = -1.0,
    kappa: float = 0.0,
    rho_origin: Optional[ForcingSeries] = None,
    t_eval: Optional[Sequence[float]] = None,
    rtol: float = 1e-10,
    atol: float = 1e-12,
    blowup_threshold: float = 1e8,
) -> RiccatiSeries:
    """Adaptive solve of ``zeta' = (alpha/2) zeta^2 + (kappa/2) rho(t,0)^2 + a(t)``.

    ``rho_origin`` defaults to zero, which is what the odd/even symmetry enforces.
    """

    forcing = a_series if callable(a_series) else (lambda _t, _a=float(a_series): _a)
    rho0 = rho_origin if rho_origin is not None else (lambda _t: 0.0)

    def slope_rate(t: float, y: np.ndarray) -> np.ndarray:
        return np.array([0.5 * alpha * y[0] ** 2 + 0.5 * kappa * rho0(t) ** 2 + forcing(t)])

    def escaped(t: float, y: np.ndarray) -> float:
        return blowup_threshold - abs(y[0])

    escaped.terminal = True  # type: ignore[attr-defined]

    solution = solve_ivp(
        slope_rate,
        (0.0, horizon),
        np.array([float(zeta0)]),
        method="DOP853",
        rtol=rtol,
        atol=atol,
        events=escaped,
        dense_output=True,
        t_eval=None if t_eval is None else np.asarray(t_eval, dtype=np.float64),
    )
    if solution.status == -1:
        LOGGER.warning("Riccati integration failed: %s", solution.message)
    blew_up = solution.status == 1
    t_blowup = float(solution.t_events[0][0]) if blew_up else None
    times = solution.t
    zeta = solution.y[0]
    if t_eval is not None and blew_up:
        keep = times < t_blowup
        times, zeta = times[keep], zeta[keep]
    return RiccatiSeries(times=times, zeta=zeta, blew_up=blew_up, t_blowup=t_blowup, _dense=solution.sol)


__all__ = [
    "ForcingSeries",
    "RiccatiDomainError",
    "RiccatiForm",
    "RiccatiSeries",
    "RiccatiSolution",
    "blowup_time",
    "classify_forcing",
    "riccati_exact",
    "riccati_numeric",
]

"""Blow-up time and rate estimation plus the symmetric blow-up hypotheses."""

from __future__ import annotations

from dataclasses import asdict, dataclass
from typing import Literal, Optional, Sequence
import logging
import math

import numpy as np
from scipy.optimize import minimize_scalar

from ..core.types import RealField, SimState, SystemParams
from ..evolution import compute_a
from ..spectral import derivative
from .riccati import RiccatiForm, RiccatiSolution, classify_forcing

LOGGER = logging.getLogger(__name__)

ASYMPTOTIC_THRESHOLD = -50.0

FitModel = Literal["linear", "odd-cubic"]


class InsufficientAsymptotics(ValueError):
    """Raised when a slope series never enters the asymptotic blow-up regime."""


@dataclass(frozen=True, slots=True)
class BlowupFit:
    """Least-squares fit of ``1/zeta`` against ``t`` close to blow-up."""

    T0_est: float
    rate_est: float
    window: tuple[float, float]
    residual: float
    points: int
    model: str = "linear"

    def __post_init__(self) -> None:
        if not self.window[1] < self.T0_est:
            raise ValueError(f"Fit window end {self.window[1]} must precede T0 estimate {self.T0_est}")


def _last_window(mask: np.ndarray) -> slice:
    indices = np.flatnonzero(mask)
    if indices.size == 0:
        return slice(0, 0)
    end = int(indices[-1])
    start = end
    while start > 0 and mask[start - 1]:
        start -= 1
    return slice(start, end + 1)


def _odd_cubic_root(t: np.ndarray, reciprocal: np.ndarray, guess: float) -> tuple[float, np.ndarray]:
    """Root ``T`` and coefficients of ``1/zeta = b1 (t - T) + b3 (t - T)^3``.

    The model has no even powers because the quadratic term of ``1/zeta``
    vanishes at a blow-up of the Riccati slope equation.
    """

    def design(root: float) -> np.ndarray:
        lag = t - root
        return np.column_stack([lag, lag**3])

    def misfit(root: float) -> float:
        coeffs, *_ = np.linalg.lstsq(design(root), reciprocal, rcond=None)
        return float(np.sum((design(root) @ coeffs - reciprocal) ** 2))

    end = float(t[-1])
    reach = max(guess - end, float(t[-1] - t[0]))
    lower = end + 1e-9 * max(1.0, abs(end))
    result = minimize_scalar(misfit, bounds=(lower, end + 4.0 * reach), method="bounded", options={"xatol": 1e-12})
    root = float(result.x)
    coeffs, *_ = np.linalg.lstsq(design(root), reciprocal, rcond=None)
    return root, coeffs


def fit_blowup(
    times: Sequence[float] | np.ndarray,
    zeta: Sequence[float] | np.ndarray,
    *,
    threshold: float = ASYMPTOTIC_THRESHOLD,
    min_points: int = 3,
    model: FitModel = "linear",
) -> BlowupFit:
    """Fit ``1/zeta`` against ``t`` over the last window where ``zeta <= threshold``.

    Close to blow-up ``(1/zeta)' -> 1/2``, so the root of the fit estimates the
    blow-up time and ``-1/p1`` estimates ``lim (T0 - t) zeta(t)``, where ``p1``
    is the linear coefficient. ``model="linear"`` fits a straight line and
    suits windows deep in the asymptotic regime. ``model="odd-cubic"`` adds the
    cubic correction of constant forcing and keeps the root accurate when the
    grid only resolves moderate slopes.
    """

    if model not in ("linear", "odd-cubic"):
        raise ValueError(f"Unknown fit model {model!r}")
    t = np.asarray(times, dtype=np.float64)
    z = np.asarray(zeta, dtype=np.float64)
    if t.shape != z.shape:
        raise ValueError(f"times and zeta must have the same shape, got {t.shape} and {z.shape}")
    window = _last_window(np.isfinite(z) & (z <= threshold))
    t_win, z_win = t[window], z[window]
    needed = max(min_points, 4 if model == "odd-cubic" else 2)
    if t_win.size < needed:
        raise InsufficientAsymptotics(
            f"Only {t_win.size} samples with zeta <= {threshold}; need at least {needed}"
        )
    center = float(t_win.mean())
    reciprocal = 1.0 / z_win
    slope, intercept = np.polyfit(t_win - center, reciprocal, 1)
    if slope <= 0.0:
        raise InsufficientAsymptotics(f"1/zeta is not increasing in the fit window (slope {slope:.3e})")
    T0_est = center - intercept / slope
    fitted = intercept + slope * (t_win - center)
    if model == "odd-cubic":
        T0_est, coeffs = _odd_cubic_root(t_win, reciprocal, float(T0_est))
        slope = float(coeffs[0])
        if slope <= 0.0:
            raise InsufficientAsymptotics(f"1/zeta is not increasing at the fitted root (slope {slope:.3e})")
        lag = t_win - T0_est
        fitted = coeffs[0] * lag + coeffs[1] * lag**3
    window_bounds = (float(t_win[0]), float(t_win[-1]))
    if not window_bounds[1] < T0_est:
        raise InsufficientAsymptotics(f"Fitted blow-up time {T0_est} precedes the data window end {window_bounds[1]}")
    residual = float(np.sqrt(np.mean((reciprocal - fitted) ** 2)))
    return BlowupFit(
        T0_est=float(T0_est),
        rate_est=float(-1.0 / slope),
        window=window_bounds,
        residual=residual,
        points=int(t_win.size),
        model=model,
    )


@dataclass(frozen=True, slots=True)
class BlowupHypothesisReport:
    """Diagnostic check of the symmetric blow-up hypotheses for given initial data."""

    odd_residual: float
    even_residual: float
    rho_at_origin: float
    zeta0: float
    slope_norm_sq: float
    rho_norm_sq: float
    a0: float
    energy_quantity: float
    parameters_admissible: bool
    symmetric: bool
    energy_condition: bool
    steep_slope_condition: bool
    form: Optional[RiccatiForm]
    predicted_T0: Optional[float]
    T0_is_exact: bool
    T0_upper_bound: Optional[float]
    notes: tuple[str, ...] = ()

    @property
    def applicable(self) -> bool:
        return self.parameters_admissible and self.symmetric and (self.energy_condition or self.steep_slope_condition)

    def as_dict(self) -> dict[str, object]:
        return asdict(self) | {"applicable": self.applicable}


def check_blowup_hypotheses(
    u0: RealField,
    rho0: RealField,
    params: SystemParams,
    *,
    symmetry_tol: float = 1e-10,
) -> BlowupHypothesisReport:
    """Check oddness/evenness, the energy sign condition and the steep-slope condition."""

    u0.check_grid(rho0)
    scale = max(1.0, u0.max_abs(), rho0.max_abs())
    odd_residual = (u0 + u0.mirrored()).max_abs()
    even_residual = (rho0 - rho0.mirrored()).max_abs()
    slope = derivative(u0)
    zeta0 = slope.at_origin()
    rho_origin = rho0.at_origin()
    slope_norm_sq = float(np.mean(slope.values**2))
    rho_norm_sq = float(np.mean(rho0.values**2))
    a0 = compute_a(SimState(0.0, u0, rho0), params)
    energy_quantity = slope_norm_sq + params.kappa * rho_norm_sq

    notes: list[str] = []
    admissible = params.alpha == -1.0 and params.kappa < 0.0
    if not admissible:
        notes.append("symmetric blow-up result requires alpha = -1 and kappa < 0")
    symmetric = (
        odd_residual <= symmetry_tol * scale
        and even_residual <= symmetry_tol * scale
        and abs(rho_origin) <= symmetry_tol * scale
        and zeta0 < 0.0
    )
    if not symmetric:
        notes.append("initial data not odd/even with rho(0) = 0 and u_x(0) < 0")
    energy_condition = energy_quantity >= -symmetry_tol * scale**2
    steep_slope_condition = zeta0 < -math.sqrt(2.0 * abs(a0))

    form: Optional[RiccatiForm] = None
    predicted: Optional[float] = None
    exact = False
    upper_bound: Optional[float] = None
    if params.alpha == -1.0 and symmetric:
        # a is conserved, so the slope equation at the origin is an autonomous Riccati ODE
        a_snapped = 0.0 if abs(a0) <= symmetry_tol * scale**2 else a0
        form = classify_forcing(a_snapped)
        predicted = RiccatiSolution.solve(zeta0, a_snapped).T0
        exact = form in ("ZeroForcing", "NegHalfForcing")
        if steep_slope_condition and abs(a0) > 0.0:
            c = math.sqrt(2.0 * abs(a0))
            upper_bound = math.log((zeta0 - c) / (zeta0 + c)) / c
    if predicted is not None and math.isinf(predicted):
        predicted = None
    return BlowupHypothesisReport(
        odd_residual=odd_residual,
        even_residual=even_residual,
        rho_at_origin=rho_origin,
        zeta0=zeta0,
        slope_norm_sq=slope_norm_sq,
        rho_norm_sq=rho_norm_sq,
        a0=a0,
        energy_quantity=energy_quantity,
        parameters_admissible=admissible,
        symmetric=symmetric,
        energy_condition=energy_condition,
        steep_slope_condition=steep_slope_condition,
        form=form,
        predicted_T0=predicted,
        T0_is_exact=exact,
        T0_upper_bound=upper_bound,
        notes=tuple(notes),
    )


__all__ = [
    "ASYMPTOTIC_THRESHOLD",
    "BlowupFit",
    "BlowupHypothesisReport",
    "FitModel",
    "InsufficientAsymptotics",
    "check_blowup_hypotheses",
    "fit_blowup",
]

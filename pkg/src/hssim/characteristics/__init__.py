"""Lagrangian flow map and along-trajectory identities."""

from .ensemble import CharacteristicEnsemble, CharacteristicTracker, InterpolationOutOfSync, advect, resolved_history
from .identities import (
    AuxiliaryKind,
    AuxiliaryMonitor,
    OrientationCheck,
    OriginSlopeSeries,
    OriginSlopeTracker,
    SignConditionError,
    check_orientation,
    check_transport_identity,
    exponential_jacobian_gap,
    monitor_auxiliary,
    rho_sup_bound,
    slope_ode_residual,
    track_origin_slope,
)

__all__ = [
    "AuxiliaryKind",
    "AuxiliaryMonitor",
    "CharacteristicEnsemble",
    "CharacteristicTracker",
    "InterpolationOutOfSync",
    "OrientationCheck",
    "OriginSlopeSeries",
    "OriginSlopeTracker",
    "SignConditionError",
    "advect",
    "check_orientation",
    "check_transport_identity",
    "exponential_jacobian_gap",
    "monitor_auxiliary",
    "resolved_history",
    "rho_sup_bound",
    "slope_ode_residual",
    "track_origin_slope",
]

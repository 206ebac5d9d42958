"""Run observers that collect output tables."""
from __future__ import annotations

from typing import Sequence

import numpy as np

from ..core.types import RealField, SimState
from ..evolution import StepEvent
from ..spectral import SobolevOrder, sobolev_norm

# the run loop stops once it is this close to the horizon
_TIME_TOL = 1e-12


class SnapshotRecorder:
    """Keeps the fields at the requested times.

    Requested times that fall between two accepted steps are filled by linear
    interpolation in time; times beyond the end of the run are skipped.
    """

    def __init__(self, times: Sequence[float]) -> None:
        self._pending = sorted(set(float(t) for t in times))
        self._previous: SimState | None = None
        self.snapshots: list[SimState] = []

    def __call__(self, event: StepEvent) -> None:
        if event.kind not in ("start", "step"):
            return
        state = event.state
        reach = state.t + _TIME_TOL * max(1.0, abs(state.t))
        while self._pending and self._pending[0] <= reach:
            target = self._pending.pop(0)
            previous = self._previous
            if target >= state.t or previous is None or state.t == previous.t:
                self.snapshots.append(state.advanced(target, state.u, state.rho))
                continue
            weight = (target - previous.t) / (state.t - previous.t)
            self.snapshots.append(
                SimState(
                    t=target,
                    u=previous.u * (1.0 - weight) + state.u * weight,
                    rho=previous.rho * (1.0 - weight) + state.rho * weight,
                )
            )
        self._previous = state


class SobolevRecorder:
    """``H^s`` norms of ``u`` and ``rho`` at the start and after every accepted step."""

    def __init__(self, orders: Sequence[float]) -> None:
        self.orders = tuple(SobolevOrder(float(s)) for s in orders)
        self.times: list[float] = []
        self.rows: list[tuple[float, ...]] = []

    def __call__(self, event: StepEvent) -> None:
        if event.kind not in ("start", "step"):
            return
        state = event.state
        row: list[float] = []
        for order in self.orders:
            row.append(sobolev_norm(state.u, order))
            row.append(sobolev_norm(state.rho, order))
        self.times.append(state.t)
        self.rows.append(tuple(row))

    @property
    def columns(self) -> list[str]:
        names: list[str] = []
        for order in self.orders:
            names.extend([f"h{order.s:g}_u", f"h{order.s:g}_rho"])
        return names

    def table(self) -> np.ndarray:
        return np.asarray(self.rows, dtype=np.float64).reshape(len(self.rows), 2 * len(self.orders))


def field_table(state: SimState) -> np.ndarray:
    """Columns ``x, u, rho, u_x`` of one snapshot."""

    u_x: RealField = state.u_x
    return np.column_stack([state.grid.points, state.u.values, state.rho.values, u_x.values])


__all__ = ["SnapshotRecorder", "SobolevRecorder", "field_table"]

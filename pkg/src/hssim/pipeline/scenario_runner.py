"""Orchestration of scenario runs and parameter sweeps."""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
import csv
from dataclasses import dataclass, field
import json
import math
from pathlib import Path
from threading import Event
from typing import Any, Callable, Literal, Optional
import logging

import numpy as np

from ..analysis import (
    BlowupHypothesisReport,
    ConservationMonitor,
    RiccatiDomainError,
    check_blowup_hypotheses,
    riccati_exact,
)
from ..characteristics import (
    CharacteristicTracker,
    OriginSlopeSeries,
    OriginSlopeTracker,
    SignConditionError,
    check_orientation,
    check_transport_identity,
    exponential_jacobian_gap,
    monitor_auxiliary,
    resolved_history,
    rho_sup_bound,
    slope_ode_residual,
)
from ..config import ScenarioConfig, SweepConfig
from ..core.types import SystemParams
from ..database import Storage
from ..evolution import Observer, RunOutcome, run
from .recorders import SnapshotRecorder, SobolevRecorder, field_table

LOGGER = logging.getLogger(__name__)

FLOAT_FORMAT = "%.17g"
# zeta is compared with the closed form only while it is well resolved
_RICCATI_COMPARISON_LIMIT = 100.0

RunnerEventKind = Literal["start", "cell", "finished", "cancelled", "error"]


@dataclass(slots=True)
class RunnerEvent:
    """Progress notification emitted by :class:`ScenarioRunner`."""

    kind: RunnerEventKind
    name: str
    message: str | None = None
    status: str | None = None


ProgressCallback = Callable[[RunnerEvent], None]


@dataclass(slots=True, eq=False)
class RunReport:
    """Outcome of :meth:`ScenarioRunner.run_scenario`."""

    name: str
    output_dir: Path
    outcome: RunOutcome
    summary: dict[str, Any]
    run_id: Optional[int] = None

    @property
    def status(self) -> str:
        return self.outcome.status


@dataclass(slots=True)
class SweepRow:
    """One ``(alpha, kappa)`` cell of a sweep."""

    alpha: float
    kappa: float
    name: str
    status: str
    t_final: Optional[float] = None
    min_slope: Optional[float] = None
    a_drift: Optional[float] = None
    energy_drift: Optional[float] = None
    blowup_time: Optional[float] = None
    error: Optional[str] = None


@dataclass(slots=True)
class SweepReport:
    name: str
    output_dir: Path
    rows: list[SweepRow] = field(default_factory=list)

    @property
    def failed(self) -> list[SweepRow]:
        return [row for row in self.rows if row.error is not None]


def _clean(value: Any) -> Any:
    """JSON-safe copy: numpy scalars become floats, non-finite numbers become ``None``."""

    if isinstance(value, dict):
        return {str(key): _clean(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [_clean(item) for item in value]
    if isinstance(value, np.ndarray):
        return [_clean(item) for item in value.tolist()]
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        number = float(value)
        return number if math.isfinite(number) else None
    return value


def _format(value: Optional[float]) -> str:
    if value is None:
        return ""
    return FLOAT_FORMAT % value


def _snapshot_name(t: float) -> str:
    return f"t_{t:.6f}.csv"


class ScenarioRunner:
    """Runs scenarios, writes their output directories and registers them."""

    def __init__(self, *, output_root: Path, storage: Optional[Storage] = None) -> None:
        self._output_root = Path(output_root)
        self._storage = storage

    @property
    def output_root(self) -> Path:
        return self._output_root

    def output_dir_for(self, config: ScenarioConfig) -> Path:
        if config.output_dir:
            target = Path(config.output_dir)
            return target if target.is_absolute() else self._output_root / target
        return self._output_root / config.name

    def run_scenario(
        self,
        config: ScenarioConfig,
        *,
        output_dir: Optional[Path] = None,
        cancel_event: Optional[Event] = None,
        progress_callback: Optional[ProgressCallback] = None,
        register: bool = True,
        sweep: Optional[str] = None,
    ) -> RunReport:
        """Execute ``config`` and write time series, snapshots and a summary.

        All files are written after the run has finished, so a failure during
        set-up or integration leaves no partial output behind.
        """

        target = Path(output_dir) if output_dir is not None else self.output_dir_for(config)
        if target.exists() and not target.is_dir():
            raise NotADirectoryError(f"Output path {target} exists and is not a directory")
        self._notify(progress_callback, RunnerEvent(kind="start", name=config.name, message=f"Running {config.name}"))

        params = config.params()
        initial = config.initial_state()
        hypotheses = check_blowup_hypotheses(initial.u, initial.rho, params)

        conservation = ConservationMonitor(params)
        observers: list[Observer] = [conservation]
        snapshots = SnapshotRecorder(config.snapshot_times)
        observers.append(snapshots)
        sobolev_spec = config.observer("sobolev")
        sobolev = SobolevRecorder(sobolev_spec.orders) if sobolev_spec else None
        if sobolev:
            observers.append(sobolev)
        characteristics_spec = config.observer("characteristics")
        tracker: Optional[CharacteristicTracker] = None
        if characteristics_spec:
            seeds = None
            if characteristics_spec.seeds is not None:
                seeds = np.arange(characteristics_spec.seeds) / characteristics_spec.seeds
            tracker = CharacteristicTracker(seeds=seeds, every=characteristics_spec.every, params=params)
            observers.append(tracker)
        origin = OriginSlopeTracker() if config.observer("origin_slope") else None
        if origin:
            observers.append(origin)

        outcome = run(initial, params, config.control, config.horizon, observers, cancel_event=cancel_event)

        summary: dict[str, Any] = {
            "name": config.name,
            "description": config.description,
            "parameters": {"alpha": config.alpha, "kappa": config.kappa, "n": config.n, "dealias": config.dealias},
            "horizon": config.horizon,
            "status": outcome.status,
            "t_final": outcome.t_final,
            "steps": outcome.steps,
            "message": outcome.message,
            "min_slope": outcome.min_slope,
            "persistence_max": outcome.persistence_max,
            "persistence_exceeded": outcome.persistence_exceeded,
            "resolution_lost_at": outcome.resolution_lost_at,
            "blowup_fit": None,
            "hypotheses": hypotheses.as_dict(),
        }
        if outcome.blowup_estimate is not None:
            fit = outcome.blowup_estimate
            summary["blowup_fit"] = {
                "T0_est": fit.T0_est,
                "rate_est": fit.rate_est,
                "window": list(fit.window),
                "residual": fit.residual,
                "points": fit.points,
                "model": fit.model,
            }
        report = conservation.report(persistence_threshold=config.control.persistence_threshold)
        if config.observer("conservation"):
            summary["conservation"] = report.as_dict()
        if params.alpha == -1.0 and conservation.samples:
            samples = conservation.samples
            summary["rho_sup_ratio"] = rho_sup_bound(
                [s.t for s in samples], [s.rho_sup for s in samples], [s.min_slope for s in samples]
            )
        if tracker is not None:
            tracker.finalize()
            summary["characteristics"] = self._characteristics_summary(
                tracker, params, conservation, outcome.resolution_lost_at
            )
        origin_series = origin.series() if origin is not None else None
        if origin_series is not None:
            summary["origin_slope"] = self._origin_summary(origin_series, hypotheses, outcome.resolution_lost_at)

        self._write_outputs(target, conservation, sobolev, snapshots, tracker, origin_series, summary)
        LOGGER.info("Scenario %s finished with %s; outputs in %s", config.name, outcome.status, target)

        run_id: Optional[int] = None
        if register and self._storage is not None:
            run_id = self.register(config, outcome, report.a_drift, target, sweep=sweep)
        kind: RunnerEventKind = "cancelled" if outcome.status == "Cancelled" else "finished"
        self._notify(progress_callback, RunnerEvent(kind=kind, name=config.name, status=outcome.status))
        return RunReport(name=config.name, output_dir=target, outcome=outcome, summary=summary, run_id=run_id)

    def register(
        self,
        config: ScenarioConfig,
        outcome: RunOutcome,
        a_drift: Optional[float],
        output_dir: Path,
        *,
        sweep: Optional[str] = None,
    ) -> Optional[int]:
        if self._storage is None:
            return None
        fit = outcome.blowup_estimate
        return self._storage.record_run(
            name=config.name,
            alpha=config.alpha,
            kappa=config.kappa,
            n=config.n,
            status=outcome.status,
            t_final=outcome.t_final,
            blowup_time=fit.T0_est if fit else None,
            blowup_rate=fit.rate_est if fit else None,
            a_drift=a_drift,
            min_slope=outcome.min_slope,
            output_dir=str(output_dir),
            sweep=sweep,
        )

    def run_sweep(
        self,
        config: SweepConfig,
        *,
        parallelism: Optional[int] = None,
        cancel_event: Optional[Event] = None,
        progress_callback: Optional[ProgressCallback] = None,
    ) -> SweepReport:
        """Run every cell of ``config``; a failing cell is recorded in its row."""

        workers = parallelism or config.parallelism
        sweep_dir = self._output_root / config.base.name
        cells = config.cells()
        LOGGER.info("Sweep %s: %d cells with parallelism %d", config.base.name, len(cells), workers)

        def execute(cell: ScenarioConfig) -> tuple[Optional[RunReport], Optional[str]]:
            if cancel_event and cancel_event.is_set():
                return None, "cancelled before start"
            try:
                return self.run_scenario(cell, output_dir=sweep_dir / cell.name, cancel_event=cancel_event, register=False), None
            except Exception as exc:  # noqa: BLE001 - a cell failure must not abort the sweep
                LOGGER.exception("Sweep cell %s failed", cell.name)
                return None, f"{type(exc).__name__}: {exc}"

        with ThreadPoolExecutor(max_workers=workers) as executor:
            results = list(executor.map(execute, cells))

        report = SweepReport(name=config.base.name, output_dir=sweep_dir)
        for cell, (cell_report, error) in zip(cells, results):
            if cell_report is None:
                LOGGER.warning("Sweep cell %s recorded as failed: %s", cell.name, error)
                report.rows.append(SweepRow(alpha=cell.alpha, kappa=cell.kappa, name=cell.name, status="Failed", error=error))
                self._notify(progress_callback, RunnerEvent(kind="error", name=cell.name, message=error))
                continue
            outcome = cell_report.outcome
            conservation = cell_report.summary.get("conservation") or {}
            fit = outcome.blowup_estimate
            report.rows.append(
                SweepRow(
                    alpha=cell.alpha,
                    kappa=cell.kappa,
                    name=cell.name,
                    status=outcome.status,
                    t_final=outcome.t_final,
                    min_slope=outcome.min_slope,
                    a_drift=conservation.get("a_drift"),
                    energy_drift=conservation.get("energy_drift"),
                    blowup_time=fit.T0_est if fit else None,
                )
            )
            if self._storage is not None:
                cell_report.run_id = self.register(
                    cell, outcome, conservation.get("a_drift"), cell_report.output_dir, sweep=config.base.name
                )
            self._notify(progress_callback, RunnerEvent(kind="cell", name=cell.name, status=outcome.status))

        sweep_dir.mkdir(parents=True, exist_ok=True)
        with (sweep_dir / "sweep.csv").open("w", encoding="utf8", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(
                ["alpha", "kappa", "name", "status", "t_final", "min_slope", "a_drift", "energy_drift", "blowup_time", "error"]
            )
            for row in report.rows:
                writer.writerow(
                    [
                        _format(row.alpha),
                        _format(row.kappa),
                        row.name,
                        row.status,
                        _format(row.t_final),
                        _format(row.min_slope),
                        _format(row.a_drift),
                        _format(row.energy_drift),
                        _format(row.blowup_time),
                        row.error or "",
                    ]
                )
        self._notify(progress_callback, RunnerEvent(kind="finished", name=config.base.name))
        return report

    @staticmethod
    def _characteristics_summary(
        tracker: CharacteristicTracker,
        params: SystemParams,
        conservation: ConservationMonitor,
        resolution_lost_at: Optional[float] = None,
    ) -> dict[str, Any]:
        history = resolved_history(tracker.history, resolution_lost_at)
        rho0 = history[0].gamma
        orientation = check_orientation(history)
        a_history = conservation.a_history()
        summary: dict[str, Any] = {
            "particles": history[0].size,
            "recorded_times": len(history),
            "transport_residual": max(check_transport_identity(e, rho0, params.alpha) for e in history),
            "jacobian_gap": max(exponential_jacobian_gap(e) for e in history),
            "min_jacobian": orientation.min_jacobian,
            "orientation_preserved": orientation.passed,
            "slope_ode_residual": slope_ode_residual(history, params, a_history),
        }
        if params.alpha in (-1.0, 0.0):
            try:
                monitor = monitor_auxiliary(history, params, a_history)
            except (SignConditionError, ValueError) as exc:
                summary["auxiliary"] = {"skipped": str(exc)}
            else:
                summary["auxiliary"] = {"kind": monitor.kind, "worst_ratio": monitor.worst_ratio, "bound": monitor.bound}
        return summary

    @staticmethod
    def _origin_summary(
        series: OriginSlopeSeries, hypotheses: BlowupHypothesisReport, resolution_lost_at: Optional[float] = None
    ) -> dict[str, Any]:
        resolved = np.ones(series.times.size, dtype=bool)
        if resolution_lost_at is not None:
            resolved = series.times < resolution_lost_at
        summary: dict[str, Any] = {
            "zeta0": float(series.zeta[0]),
            "max_abs_rho_origin": float(np.max(np.abs(series.rho_origin))),
            "max_odd_residual": float(np.max(series.odd_residual)),
            "max_even_residual": float(np.max(series.even_residual)),
            "riccati_relative_gap": None,
            "max_resolved_abs_zeta": float(np.max(np.abs(series.zeta[resolved]))),
        }
        if hypotheses.predicted_T0 is not None and hypotheses.symmetric:
            mask = resolved & (np.abs(series.zeta) <= _RICCATI_COMPARISON_LIMIT) & (series.times < hypotheses.predicted_T0)
            try:
                exact = np.asarray(riccati_exact(hypotheses.zeta0, hypotheses.a0, series.times[mask]))
            except RiccatiDomainError:
                return summary
            if exact.size:
                summary["riccati_relative_gap"] = float(np.max(np.abs(series.zeta[mask] - exact) / np.abs(exact)))
        return summary

    @staticmethod
    def _write_outputs(
        target: Path,
        conservation: ConservationMonitor,
        sobolev: Optional[SobolevRecorder],
        snapshots: SnapshotRecorder,
        tracker: Optional[CharacteristicTracker],
        origin_series: Optional[OriginSlopeSeries],
        summary: dict[str, Any],
    ) -> None:
        target.mkdir(parents=True, exist_ok=True)
        samples = conservation.samples
        columns = ["t", "a", "E", "min_u_x", "max_u_x", "rho_sup"]
        table = np.array(
            [[s.t, s.a, s.energy, s.min_slope, s.max_slope, s.rho_sup] for s in samples], dtype=np.float64
        ).reshape(len(samples), len(columns))
        if sobolev is not None:
            columns += sobolev.columns
            table = np.hstack([table, sobolev.table()])
        np.savetxt(target / "timeseries.csv", table, fmt=FLOAT_FORMAT, delimiter=",", header=",".join(columns), comments="")

        if snapshots.snapshots:
            snapshot_dir = target / "snapshots"
            snapshot_dir.mkdir(exist_ok=True)
            for state in snapshots.snapshots:
                np.savetxt(
                    snapshot_dir / _snapshot_name(state.t),
                    field_table(state),
                    fmt=FLOAT_FORMAT,
                    delimiter=",",
                    header="x,u,rho,u_x",
                    comments="",
                )

        if tracker is not None:
            rows = [
                np.column_stack(
                    [np.full(e.size, e.t), e.seeds, e.positions, e.phi_x, e.M, e.gamma, e.N, e.varpi]
                )
                for e in tracker.history
            ]
            np.savetxt(
                target / "characteristics.csv",
                np.vstack(rows) if rows else np.zeros((0, 8)),
                fmt=FLOAT_FORMAT,
                delimiter=",",
                header="t,seed,phi,phi_x,M,gamma,N,varpi",
                comments="",
            )

        if origin_series is not None:
            np.savetxt(
                target / "origin_slope.csv",
                np.column_stack(
                    [
                        origin_series.times,
                        origin_series.zeta,
                        origin_series.rho_origin,
                        origin_series.odd_residual,
                        origin_series.even_residual,
                    ]
                ),
                fmt=FLOAT_FORMAT,
                delimiter=",",
                header="t,zeta,rho_origin,odd_residual,even_residual",
                comments="",
            )

        with (target / "summary.json").open("w", encoding="utf8") as fh:
            json.dump(_clean(summary), fh, indent=2, sort_keys=True)
            fh.write("\n")

    @staticmethod
    def _notify(callback: Optional[ProgressCallback], event: RunnerEvent) -> None:
        if callback:
            callback(event)


__all__ = [
    "FLOAT_FORMAT",
    "ProgressCallback",
    "RunReport",
    "RunnerEvent",
    "RunnerEventKind",
    "ScenarioRunner",
    "SweepReport",
    "SweepRow",
]

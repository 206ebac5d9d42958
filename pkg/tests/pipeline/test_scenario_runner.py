from __future__ import annotations

import csv
import json
from threading import Event
from typing import List

import numpy as np
import pytest

from hssim.config import ObserverSpec, ScenarioConfig, SweepConfig
from hssim.core import cosine, sine
from hssim.database import create_storage
from hssim.evolution import StepControl
from hssim.pipeline import RunnerEvent, ScenarioRunner


def _config(**overrides) -> ScenarioConfig:
    values = dict(
        name="smooth",
        alpha=-1.0,
        kappa=1.0,
        n=32,
        u0=sine(0.1),
        rho0=cosine(0.1, offset=0.5),
        horizon=0.1,
        control=StepControl(dt_max=1e-2),
        observers=(
            ObserverSpec("conservation"),
            ObserverSpec("sobolev", orders=(1.0,)),
            ObserverSpec("characteristics", seeds=8),
            ObserverSpec("origin_slope"),
        ),
        snapshot_times=(0.0, 0.05, 0.1),
    )
    values.update(overrides)
    return ScenarioConfig(**values)


@pytest.fixture()
def storage(tmp_path):
    storage = create_storage(f"sqlite:///{(tmp_path / 'runs.db').as_posix()}")
    yield storage
    storage.dispose()


def test_run_scenario_writes_outputs_and_registers(tmp_path, storage):
    runner = ScenarioRunner(output_root=tmp_path / "out", storage=storage)
    captured: List[RunnerEvent] = []

    report = runner.run_scenario(_config(), progress_callback=captured.append)

    assert report.status == "CompletedHorizon"
    assert report.output_dir == tmp_path / "out" / "smooth"
    assert [event.kind for event in captured] == ["start", "finished"]
    assert captured[-1].status == "CompletedHorizon"

    header = (report.output_dir / "timeseries.csv").read_text(encoding="utf8").splitlines()[0]
    assert header == "t,a,E,min_u_x,max_u_x,rho_sup,h1_u,h1_rho"
    series = np.loadtxt(report.output_dir / "timeseries.csv", delimiter=",", skiprows=1)
    assert series[0, 0] == 0.0
    assert series[-1, 0] == pytest.approx(0.1)
    assert np.ptp(series[:, 1]) < 1e-8

    snapshot_files = sorted(path.name for path in (report.output_dir / "snapshots").iterdir())
    assert snapshot_files == ["t_0.000000.csv", "t_0.050000.csv", "t_0.100000.csv"]
    characteristics = np.loadtxt(report.output_dir / "characteristics.csv", delimiter=",", skiprows=1)
    assert characteristics.shape[1] == 8
    assert (report.output_dir / "origin_slope.csv").exists()

    summary = json.loads((report.output_dir / "summary.json").read_text(encoding="utf8"))
    assert summary["status"] == "CompletedHorizon"
    assert summary["parameters"] == {"alpha": -1.0, "kappa": 1.0, "n": 32, "dealias": True}
    assert summary["blowup_fit"] is None
    assert summary["conservation"]["a_drift"] < 1e-8
    assert summary["characteristics"]["particles"] == 8
    assert summary["characteristics"]["orientation_preserved"] is True
    assert summary["characteristics"]["auxiliary"]["kind"] == "W_alpha_minus1"
    assert summary["hypotheses"]["applicable"] is False
    assert summary["origin_slope"]["riccati_relative_gap"] is None

    overview = storage.list_runs()
    assert overview[0].identifier == report.run_id
    assert overview[0].name == "smooth"
    assert overview[0].output_dir == str(report.output_dir)


def test_run_scenario_without_optional_observers(tmp_path):
    runner = ScenarioRunner(output_root=tmp_path)
    report = runner.run_scenario(_config(observers=(), snapshot_times=()), output_dir=tmp_path / "plain")

    assert report.run_id is None
    assert sorted(path.name for path in report.output_dir.iterdir()) == ["summary.json", "timeseries.csv"]
    summary = json.loads((report.output_dir / "summary.json").read_text(encoding="utf8"))
    assert "conservation" not in summary
    assert "characteristics" not in summary


def test_relative_output_dir_is_placed_under_the_root(tmp_path):
    runner = ScenarioRunner(output_root=tmp_path)
    assert runner.output_dir_for(_config(output_dir="custom/place")) == tmp_path / "custom" / "place"
    assert runner.output_dir_for(_config()) == tmp_path / "smooth"


def test_output_path_must_be_a_directory(tmp_path):
    blocker = tmp_path / "smooth"
    blocker.write_text("not a directory", encoding="utf8")
    with pytest.raises(NotADirectoryError):
        ScenarioRunner(output_root=tmp_path).run_scenario(_config())


def test_cancelled_run_is_reported(tmp_path):
    cancel_event = Event()
    cancel_event.set()
    captured: List[RunnerEvent] = []

    report = ScenarioRunner(output_root=tmp_path).run_scenario(
        _config(), cancel_event=cancel_event, progress_callback=captured.append
    )

    assert report.status == "Cancelled"
    assert captured[-1].kind == "cancelled"
    assert (report.output_dir / "summary.json").exists()


def test_symmetric_blowup_summary(tmp_path):
    config = _config(
        name="blowup",
        kappa=-1.0,
        n=256,
        u0=sine(-1.0),
        rho0=cosine(0.0),
        horizon=0.5,
        dealias=False,
        control=StepControl(
            cfl=0.2, dt_max=2e-3, slope_floor=-500.0, resolution_tol=1e-4, halt_on_resolution_loss=True
        ),
        observers=(ObserverSpec("conservation"), ObserverSpec("origin_slope")),
        snapshot_times=(),
    )
    report = ScenarioRunner(output_root=tmp_path).run_scenario(config)

    assert report.status == "BlowUpDetected"
    summary = report.summary
    assert summary["hypotheses"]["applicable"] is True
    assert summary["resolution_lost_at"] == report.outcome.t_final
    assert summary["blowup_fit"]["model"] == "odd-cubic"
    assert summary["blowup_fit"]["T0_est"] == pytest.approx(0.2771, abs=1e-2)
    assert summary["origin_slope"]["riccati_relative_gap"] < 1e-3
    assert summary["origin_slope"]["max_resolved_abs_zeta"] > 3.0 * np.pi
    assert summary["origin_slope"]["max_abs_rho_origin"] == 0.0


def test_sweep_writes_rows_and_registers_cells(tmp_path, storage):
    runner = ScenarioRunner(output_root=tmp_path, storage=storage)
    sweep = SweepConfig(base=_config(observers=(ObserverSpec("conservation"),), snapshot_times=()), alphas=(-1.0, 0.0), kappas=(1.0,), parallelism=2)
    captured: List[RunnerEvent] = []

    report = runner.run_sweep(sweep, progress_callback=captured.append)

    assert [row.name for row in report.rows] == ["smooth-alpha-1-kappa1", "smooth-alpha0-kappa1"]
    assert all(row.status == "CompletedHorizon" for row in report.rows)
    assert not report.failed
    assert captured[-1].kind == "finished"
    with (tmp_path / "smooth" / "sweep.csv").open(encoding="utf8", newline="") as fh:
        rows = list(csv.DictReader(fh))
    assert [row["name"] for row in rows] == ["smooth-alpha-1-kappa1", "smooth-alpha0-kappa1"]
    assert rows[0]["error"] == ""
    assert float(rows[0]["a_drift"]) < 1e-8
    assert {run.sweep for run in storage.list_runs()} == {"smooth"}
    assert (tmp_path / "smooth" / "smooth-alpha0-kappa1" / "summary.json").exists()


def test_failing_sweep_cell_does_not_abort_the_sweep(tmp_path):
    runner = ScenarioRunner(output_root=tmp_path)
    sweep = SweepConfig(base=_config(observers=(), snapshot_times=()), alphas=(-1.0,), kappas=(-1.0, 1.0))
    (tmp_path / "smooth").mkdir()
    (tmp_path / "smooth" / "smooth-alpha-1-kappa-1").write_text("blocks the cell", encoding="utf8")

    report = runner.run_sweep(sweep, parallelism=1)

    assert [row.status for row in report.rows] == ["Failed", "CompletedHorizon"]
    assert report.failed[0].error.startswith("NotADirectoryError")
    text = (tmp_path / "smooth" / "sweep.csv").read_text(encoding="utf8")
    assert "NotADirectoryError" in text


def test_sweep_rows_do_not_depend_on_parallelism(tmp_path):
    sweep = SweepConfig(
        base=_config(observers=(ObserverSpec("conservation"),), snapshot_times=()),
        alphas=(-1.0, 0.0, 1.0),
        kappas=(-1.0, 1.0),
    )

    serial = ScenarioRunner(output_root=tmp_path / "serial").run_sweep(sweep, parallelism=1)
    parallel = ScenarioRunner(output_root=tmp_path / "parallel").run_sweep(sweep, parallelism=4)

    assert serial.rows == parallel.rows
    serial_csv = (tmp_path / "serial" / "smooth" / "sweep.csv").read_bytes()
    assert serial_csv == (tmp_path / "parallel" / "smooth" / "sweep.csv").read_bytes()


def test_identical_configs_write_identical_timeseries(tmp_path):
    runner = ScenarioRunner(output_root=tmp_path)
    first = runner.run_scenario(_config(), output_dir=tmp_path / "first")
    second = runner.run_scenario(_config(), output_dir=tmp_path / "second")

    assert (first.output_dir / "timeseries.csv").read_bytes() == (second.output_dir / "timeseries.csv").read_bytes()

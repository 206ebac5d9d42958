from __future__ import annotations

import math

from sqlalchemy import select

from hssim.database import RunRecord, create_storage


def test_list_runs_returns_newest_first(tmp_path):
    database_url = f"sqlite:///{(tmp_path / 'nested' / 'runs.db').as_posix()}"
    storage = create_storage(database_url)

    first = storage.record_run(name="alpha-1", alpha=-1.0, kappa=1.0, n=64, status="CompletedHorizon", t_final=1.0)
    second = storage.record_run(
        name="blowup",
        alpha=-1.0,
        kappa=-1.0,
        n=256,
        status="BlowUpDetected",
        t_final=0.31,
        blowup_time=1.0 / math.pi,
        blowup_rate=-2.0,
        output_dir="out/blowup",
    )

    overview = storage.list_runs()
    assert [run.identifier for run in overview] == [second, first]
    assert overview[0].status == "BlowUpDetected"
    assert overview[0].blowup_time == 1.0 / math.pi
    assert overview[0].output_dir == "out/blowup"
    assert overview[0].created_at is not None
    assert overview[1].blowup_time is None
    assert len(storage.list_runs(limit=1)) == 1
    assert (tmp_path / "nested" / "runs.db").exists()
    storage.dispose()


def test_non_finite_values_are_stored_as_null(tmp_path):
    storage = create_storage(f"sqlite:///{(tmp_path / 'runs.db').as_posix()}")
    identifier = storage.record_run(
        name="broken",
        alpha=1.0,
        kappa=1.0,
        n=32,
        status="NumericalBreakdown",
        t_final=0.2,
        blowup_time=math.inf,
        a_drift=math.nan,
        min_slope=-3.0,
    )

    with storage.session() as session:
        record = session.scalars(select(RunRecord).where(RunRecord.id == identifier)).one()
        assert record.blowup_time is None
        assert record.a_drift is None
        assert record.min_slope == -3.0


def test_list_runs_filters_by_sweep():
    storage = create_storage("sqlite:///:memory:")
    storage.record_run(name="single", alpha=-1.0, kappa=1.0, n=64, status="CompletedHorizon", t_final=1.0)
    storage.record_run(
        name="cell", alpha=-1.0, kappa=-1.0, n=64, status="CompletedHorizon", t_final=1.0, sweep="kappa-dichotomy"
    )

    cells = storage.list_runs(sweep="kappa-dichotomy")
    assert [run.name for run in cells] == ["cell"]
    assert cells[0].sweep == "kappa-dichotomy"

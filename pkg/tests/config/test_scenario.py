import json

import pytest

from hssim.config import (
    ObserverSpec,
    ScenarioConfig,
    ScenarioConfigError,
    SweepConfig,
    load_scenario,
    load_sweep,
    parse_scenario,
    parse_sweep,
)
from hssim.core import cosine, sine
from hssim.evolution import StepControl


def _document(**overrides):
    data = {
        "name": "demo",
        "alpha": -1,
        "kappa": "1.5",
        "n": 64,
        "u0": {"family": "sine", "amplitude": 0.1},
        "rho0": {"family": "cosine", "amplitude": 0.1, "offset": 0.5},
        "horizon": 0.5,
        "control": {"cfl": 0.2, "dt_max": 0.001},
        "observers": [{"kind": "conservation"}, {"kind": "sobolev", "orders": [1, 2]}],
        "snapshot_times": [0, 0.25],
    }
    data.update(overrides)
    return data


def _scenario(**overrides):
    values = dict(name="demo", alpha=-1.0, kappa=1.0, n=32, u0=sine(0.1), rho0=cosine(0.1, offset=0.5), horizon=1.0)
    values.update(overrides)
    return ScenarioConfig(**values)


def test_parse_scenario_coerces_nested_values():
    config = parse_scenario(_document())

    assert config.alpha == -1.0 and isinstance(config.alpha, float)
    assert config.kappa == pytest.approx(1.5)
    assert config.u0 == sine(0.1)
    assert config.control == StepControl(cfl=0.2, dt_max=0.001)
    assert config.observers == (ObserverSpec("conservation"), ObserverSpec("sobolev", orders=(1.0, 2.0)))
    assert config.snapshot_times == (0.0, 0.25)
    assert config.observer("sobolev").orders == (1.0, 2.0)
    assert config.observer("characteristics") is None


def test_parse_scenario_reads_resolution_settings():
    control = {"cfl": 0.2, "dt_max": 0.001, "resolution_tol": "1e-4", "halt_on_resolution_loss": True}
    config = parse_scenario(_document(control=control, dealias=False))

    assert config.control.resolution_tol == pytest.approx(1e-4)
    assert config.control.halt_on_resolution_loss is True
    assert config.dealias is False


def test_scenario_builds_state_and_parameters():
    config = _scenario(gauge_constant=0.25, dealias=False)
    params = config.params()
    state = config.initial_state()

    assert params.alpha == -1.0 and params.kappa == 1.0
    assert params.dealias is False
    assert params.gauge(3.0) == 0.25
    assert state.t == 0.0
    assert state.grid.n == 32
    assert state.rho.max() == pytest.approx(0.6)
    assert _scenario().params().gauge(3.0) == 0.0


@pytest.mark.parametrize(
    ("overrides", "path"),
    [
        ({"n": 63}, "ScenarioConfig"),
        ({"horizon": 0}, "ScenarioConfig"),
        ({"control": {"cfl": 2.0}}, "control"),
        ({"u0": {"family": "gaussian"}}, "u0.family"),
        ({"observers": [{"kind": "energy"}]}, "observers[0].kind"),
        ({"snapshot_times": [2.0]}, "ScenarioConfig"),
        ({"typo": 1}, "typo"),
        ({"control": {"cfl": 0.2, "dtmax": 1}}, "control.dtmax"),
    ],
)
def test_invalid_documents_name_the_field(overrides, path):
    with pytest.raises(ScenarioConfigError) as excinfo:
        parse_scenario(_document(**overrides))
    assert excinfo.value.path == path


def test_duplicate_observers_are_rejected():
    with pytest.raises(ValueError):
        _scenario(observers=(ObserverSpec("conservation"), ObserverSpec("conservation")))
    with pytest.raises(ValueError):
        ObserverSpec("sobolev")
    with pytest.raises(ValueError):
        ObserverSpec("characteristics", seeds=0)


def test_load_scenario_reports_syntax_errors_with_position(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text('{\n  "name": "demo",\n  "alpha": ,\n}\n', encoding="utf8")

    with pytest.raises(ScenarioConfigError) as excinfo:
        load_scenario(path)
    assert excinfo.value.line == 3
    assert excinfo.value.source == str(path)
    assert str(path) in str(excinfo.value)


def test_load_scenario_missing_file(tmp_path):
    with pytest.raises(ScenarioConfigError):
        load_scenario(tmp_path / "missing.json")


def test_load_scenario_round_trip_through_as_dict(tmp_path):
    config = parse_scenario(_document())
    path = tmp_path / "scenario.json"
    path.write_text(json.dumps(config.as_dict()), encoding="utf8")

    assert load_scenario(path) == config


def test_sweep_cells_are_row_major(tmp_path):
    path = tmp_path / "sweep.json"
    path.write_text(json.dumps({"base": _document(), "alphas": [-1, 0], "kappas": [-1, 1], "parallelism": 2}), encoding="utf8")

    sweep = load_sweep(path)
    cells = sweep.cells()

    assert sweep.parallelism == 2
    assert [(cell.alpha, cell.kappa) for cell in cells] == [(-1.0, -1.0), (-1.0, 1.0), (0.0, -1.0), (0.0, 1.0)]
    assert cells[1].name == "demo-alpha-1-kappa1"
    assert all(cell.n == 64 for cell in cells)


def test_sweep_axes_must_not_be_empty():
    with pytest.raises(ValueError):
        SweepConfig(base=_scenario(), alphas=(), kappas=(1.0,))
    with pytest.raises(ScenarioConfigError):
        parse_sweep({"base": _document(), "alphas": [-1], "kappas": []})
    with pytest.raises(ScenarioConfigError):
        parse_sweep(["not", "an", "object"])

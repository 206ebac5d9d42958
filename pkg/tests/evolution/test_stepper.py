from __future__ import annotations

import math
from threading import Event

import numpy as np
import pytest

from hssim.analysis import blowup_time
from hssim.core import RealField, SimState, SystemParams, cosine, make_grid, raised_cosine, sample, sine
from hssim.evolution import (
    NumericalBreakdown,
    StepControl,
    StepEvent,
    compute_a,
    persistence_quantity,
    propose_dt,
    raw_dt,
    resolution_indicator,
    rhs,
    run,
    step,
)
from hssim.spectral import interpolate_many


def _state(n, u, rho, t=0.0):
    grid = make_grid(n)
    return SimState(t, sample(u, grid), sample(rho, grid))


def _zero_state(n=32):
    grid = make_grid(n)
    return SimState(0.0, RealField.zeros(grid), RealField.zeros(grid))


def test_step_control_validation():
    with pytest.raises(ValueError):
        StepControl(cfl=0.0)
    with pytest.raises(ValueError):
        StepControl(dt_min=1e-2, dt_max=1e-3)
    with pytest.raises(ValueError):
        StepControl(slope_floor=1.0)
    with pytest.raises(ValueError):
        StepControl(fixed_dt=-1.0)
    with pytest.raises(ValueError):
        StepControl(resolution_tol=1.5)
    with pytest.raises(ValueError):
        StepControl(halt_on_resolution_loss=True)


def test_compute_a_matches_quadrature():
    state = _state(64, sine(0.1), cosine(0.0, offset=0.5))
    a = compute_a(state, SystemParams(alpha=-1.0, kappa=1.0))

    assert a == pytest.approx(-0.125 - 0.01 * math.pi**2, rel=1e-12)
    assert compute_a(_zero_state(), SystemParams(-1.0, 1.0)) == 0.0


def test_rhs_vanishes_for_trivial_states():
    params = SystemParams(alpha=0.5, kappa=-1.0)
    du, drho = rhs(_zero_state(), params)
    assert du.max_abs() == 0.0 and drho.max_abs() == 0.0

    grid = make_grid(32)
    shifted = SimState(0.0, RealField.constant(grid, 0.7), RealField.zeros(grid))
    du, drho = rhs(shifted, params)
    assert du.max_abs() < 1e-14 and drho.max_abs() == 0.0


def test_rhs_adds_the_gauge():
    grid = make_grid(32)
    state = SimState(0.0, RealField.zeros(grid), RealField.zeros(grid))
    du, _ = rhs(state, SystemParams(-1.0, 1.0, gauge=lambda t: 0.25))

    np.testing.assert_allclose(du.values, 0.25)


def test_zero_state_steps_with_dt_max():
    control = StepControl(dt_max=1e-2)
    advanced = step(_zero_state(), SystemParams(-1.0, 1.0), control)

    assert advanced.t == pytest.approx(1e-2)
    assert advanced.u.max_abs() == 0.0


def test_dt_follows_the_slope_limit():
    control = StepControl(cfl=0.5, dt_max=1.0)
    steep = _state(64, sine(1.0, frequency=16), cosine(0.0))
    steeper = _state(64, sine(1.0, frequency=20), cosine(0.0))

    # 2 pi k dx > 1, so the stretching bound 1 / |u_x|_inf is the active one
    assert raw_dt(steep, control) == pytest.approx(0.5 / (2 * math.pi * 16), rel=1e-6)
    assert raw_dt(steeper, control) < raw_dt(steep, control)
    assert propose_dt(steep, StepControl(fixed_dt=1e-3)) == 1e-3


def test_rk4_local_error_is_fifth_order():
    params = SystemParams(alpha=-1.0, kappa=1.0)
    control = StepControl(dt_max=1.0)
    state = _state(64, sine(0.1), cosine(0.1, offset=0.5))

    def local_error(dt):
        coarse = step(state, params, control, dt=dt)
        fine = state
        for _ in range(8):
            fine = step(fine, params, control, dt=dt / 8)
        return (coarse.u - fine.u).max_abs() + (coarse.rho - fine.rho).max_abs()

    ratio = local_error(0.2) / local_error(0.1)
    assert 20.0 < ratio < 45.0


def test_step_rejects_non_finite_state():
    grid = make_grid(16)
    values = np.zeros(16)
    values[3] = np.nan
    state = SimState(0.0, RealField(grid, values), RealField.zeros(grid))

    with pytest.raises(NumericalBreakdown):
        step(state, SystemParams(-1.0, 1.0), StepControl())


def test_run_with_reached_horizon_completes_immediately():
    events: list[StepEvent] = []
    state = _state(32, sine(0.1), cosine(0.0, offset=1.0), t=0.5)
    outcome = run(state, SystemParams(-1.0, 1.0), StepControl(), 0.5, [events.append])

    assert outcome.status == "CompletedHorizon"
    assert outcome.steps == 0
    assert [event.kind for event in events] == ["start", "finished"]


def test_run_lands_exactly_on_horizon_and_notifies_observers():
    events: list[StepEvent] = []
    state = _state(32, sine(0.1), cosine(0.1, offset=0.5))
    outcome = run(state, SystemParams(-1.0, 1.0), StepControl(dt_max=3e-2), 0.1, [events.append])

    assert outcome.status == "CompletedHorizon"
    assert outcome.t_final == pytest.approx(0.1, abs=1e-14)
    assert events[0].kind == "start" and events[-1].kind == "finished"
    steps = [event for event in events if event.kind == "step"]
    assert len(steps) == outcome.steps
    assert all(b.state.t > a.state.t for a, b in zip(steps, steps[1:]))
    assert outcome.slope_values.size == outcome.steps + 1


def test_run_honours_cancel_event():
    cancel = Event()
    cancel.set()
    outcome = run(_state(32, sine(0.1), cosine(0.0)), SystemParams(-1.0, 1.0), StepControl(), 1.0, cancel_event=cancel)

    assert outcome.status == "Cancelled"
    assert outcome.steps == 0


def test_persistence_threshold_is_reported_without_stopping():
    state = _state(32, sine(0.1), cosine(0.1, offset=0.5))
    control = StepControl(dt_max=5e-2, persistence_threshold=1e-3)
    outcome = run(state, SystemParams(-1.0, 1.0), control, 0.1)

    assert outcome.status == "CompletedHorizon"
    assert outcome.persistence_exceeded is True
    assert outcome.persistence_max >= persistence_quantity(state)


def test_symmetric_blow_up_is_detected_when_resolution_runs_out():
    state = _state(256, sine(-1.0), cosine(0.0))
    params = SystemParams(alpha=-1.0, kappa=-1.0, dealias=False)
    control = StepControl(cfl=0.2, dt_max=2e-3, slope_floor=-500.0, resolution_tol=1e-4, halt_on_resolution_loss=True)
    outcome = run(state, params, control, 1.0)
    T0 = blowup_time(-2.0 * math.pi, -math.pi**2)

    assert outcome.status == "BlowUpDetected"
    assert outcome.resolution_lost_at == outcome.t_final
    assert resolution_indicator(outcome.final_state, params) > 1e-4
    assert outcome.min_slope < -3.0 * math.pi
    assert outcome.blowup_estimate is not None
    assert outcome.blowup_estimate.model == "odd-cubic"
    assert outcome.t_final < outcome.blowup_estimate.T0_est
    assert outcome.blowup_estimate.T0_est == pytest.approx(T0, abs=1e-2)


def test_resolution_loss_is_recorded_without_stopping():
    # k = 25 lies in the top third of the band k < 32 kept without dealiasing
    state = _state(64, sine(0.01, frequency=25), cosine(0.0))
    params = SystemParams(alpha=-1.0, kappa=1.0, dealias=False)
    outcome = run(state, params, StepControl(dt_max=1e-3, resolution_tol=0.5), 5e-3)

    assert outcome.status == "CompletedHorizon"
    assert outcome.resolution_lost_at == pytest.approx(1e-3)


def test_halting_on_resolution_loss_needs_a_diverging_slope():
    state = _state(64, sine(0.01, frequency=25), cosine(0.0))
    params = SystemParams(alpha=-1.0, kappa=1.0, dealias=False)
    control = StepControl(dt_max=1e-3, resolution_tol=0.5, halt_on_resolution_loss=True)
    outcome = run(state, params, control, 1.0)

    assert outcome.status == "NumericalBreakdown"
    assert outcome.blowup_estimate is None
    assert outcome.steps == 1
    assert "resolution lost" in outcome.message


def test_rk4_global_error_is_fourth_order_with_fixed_steps():
    params = SystemParams(alpha=-1.0, kappa=1.0)
    state = _state(16, sine(0.3), cosine(0.1, offset=0.5))
    reference = run(state, params, StepControl(fixed_dt=0.03125 / 16), 0.5).final_state

    def global_error(dt):
        final = run(state, params, StepControl(fixed_dt=dt), 0.5).final_state
        return (final.u - reference.u).max_abs() + (final.rho - reference.rho).max_abs()

    assert global_error(0.0625) / global_error(0.03125) >= 12.0


def test_spatial_error_decays_spectrally():
    params = SystemParams(alpha=-1.0, kappa=-1.0, dealias=False)
    rho0 = raised_cosine(2.0 * math.pi / math.sqrt(3.0))
    control = StepControl(fixed_dt=1e-3)

    def final_u(n):
        return run(_state(n, sine(-1.0), rho0), params, control, 0.1).final_state.u.values

    reference = final_u(512)
    errors = [float(np.max(np.abs(final_u(n) - reference[:: 512 // n]))) for n in (64, 128, 256)]

    assert errors[0] < 1e-2
    assert errors[1] <= max(0.05 * errors[0], 1e-11)
    assert errors[2] <= max(0.05 * errors[1], 1e-11)


def test_density_sup_is_invariant_when_alpha_vanishes():
    state = _state(64, sine(0.1), cosine(0.1, offset=0.5))
    outcome = run(state, SystemParams(alpha=0.0, kappa=1.0), StepControl(dt_max=5e-3), 0.5)
    xs = np.arange(2048) / 2048

    def fine_sup(rho):
        return float(np.max(np.abs(interpolate_many(rho, xs))))

    assert outcome.status == "CompletedHorizon"
    assert fine_sup(outcome.final_state.rho) == pytest.approx(fine_sup(state.rho), abs=1e-5)


def test_ideal_zero_density_stays_zero_for_every_alpha():
    for alpha in (-2.0, -1.0, 0.0, 1.0):
        state = _state(32, sine(0.1), cosine(0.0))
        outcome = run(state, SystemParams(alpha=alpha, kappa=1.0), StepControl(dt_max=2e-2), 0.2)
        assert outcome.final_state.rho.max_abs() == 0.0

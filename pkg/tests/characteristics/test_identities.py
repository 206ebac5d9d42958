from __future__ import annotations

import math

import numpy as np
import pytest

from hssim.analysis import ConservationMonitor, riccati_exact
from hssim.characteristics import (
    CharacteristicEnsemble,
    CharacteristicTracker,
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
from hssim.core import SimState, SystemParams, constant, cosine, make_grid, raised_cosine, sample, sine
from hssim.evolution import StepControl, run


def _tracked_run(alpha, kappa, *, rho=None, horizon=0.5, n=64):
    grid = make_grid(n)
    state = SimState(0.0, sample(sine(0.1), grid), sample(rho or cosine(0.1, offset=0.5), grid))
    params = SystemParams(alpha=alpha, kappa=kappa)
    tracker = CharacteristicTracker()
    monitor = ConservationMonitor(params)
    run(state, params, StepControl(dt_max=5e-3), horizon, [tracker, monitor])
    return state, params, tracker.history, monitor.a_history()


@pytest.mark.parametrize("alpha", [-1.0, 0.0, 1.0])
def test_transport_identity_and_orientation(alpha):
    initial, _, history, _ = _tracked_run(alpha, 1.0)
    final = history[-1]
    assert check_transport_identity(final, initial.rho.values, alpha) < 1e-4
    assert exponential_jacobian_gap(final) < 1e-7
    orientation = check_orientation(history)
    assert orientation.passed
    assert orientation.min_jacobian > 0.0


def test_transport_identity_checks_seed_count():
    _, _, history, _ = _tracked_run(-1.0, 1.0, horizon=0.05)
    with pytest.raises(ValueError):
        check_transport_identity(history[-1], [1.0, 2.0], -1.0)


def test_transport_residual_uses_the_density_times_jacobian_form():
    grid = make_grid(8)
    base = CharacteristicEnsemble.seeded(SimState(0.0, sample(sine(0.1), grid), sample(constant(1.0), grid)), [0.1, 0.6])
    stretched = CharacteristicEnsemble(
        t=0.2,
        seeds=base.seeds,
        phi=base.phi,
        phi_x=np.array([0.5, 2.0]),
        log_jacobian=np.log([0.5, 2.0]),
        M=base.M,
        gamma=np.array([3.0, 0.25]),
        N=base.N,
        varpi=base.varpi,
    )

    # |rho(phi) phi_x - rho0| = |1.5 - 1| and |0.5 - 1|
    assert check_transport_identity(stretched, [1.0, 1.0], -1.0) == pytest.approx(0.5)
    assert check_transport_identity(stretched, [3.0, 0.25], 0.0) == 0.0


def test_orientation_flags_crossed_particles():
    grid = make_grid(8)
    ensemble = CharacteristicEnsemble.seeded(SimState(0.0, sample(sine(0.1), grid), sample(constant(1.0), grid)))
    crossed = CharacteristicEnsemble(
        t=0.1,
        seeds=ensemble.seeds,
        phi=ensemble.phi[::-1].copy(),
        phi_x=ensemble.phi_x,
        log_jacobian=ensemble.log_jacobian,
        M=ensemble.M,
        gamma=ensemble.gamma,
        N=ensemble.N,
        varpi=ensemble.varpi,
    )
    assert not check_orientation([ensemble, crossed]).passed


@pytest.mark.parametrize(("alpha", "kind"), [(-1.0, "W_alpha_minus1"), (0.0, "Wtilde_alpha0")])
def test_auxiliary_function_stays_below_its_envelope(alpha, kind):
    _, params, history, a_history = _tracked_run(alpha, 1.0)
    monitor = monitor_auxiliary(history, params, a_history)
    assert monitor.kind == kind
    assert monitor.values.shape == (len(history), history[0].size)
    assert monitor.worst_ratio <= 1.0 + 1e-6
    assert monitor.bound >= 1.0


def test_auxiliary_function_preconditions():
    _, _, history, a_history = _tracked_run(-1.0, 1.0, horizon=0.05)
    with pytest.raises(ValueError):
        monitor_auxiliary(history, SystemParams(alpha=-1.0, kappa=-1.0), a_history)
    with pytest.raises(ValueError):
        monitor_auxiliary(history, SystemParams(alpha=1.0, kappa=1.0), a_history)
    with pytest.raises(ValueError):
        monitor_auxiliary([], SystemParams(alpha=0.0, kappa=1.0), a_history)

    _, params, signed, signed_a = _tracked_run(-1.0, 1.0, rho=cosine(1.0), horizon=0.05)
    with pytest.raises(SignConditionError):
        monitor_auxiliary(signed, params, signed_a)


def test_rho_sup_bound_ratios():
    times = np.linspace(0.0, 1.0, 11)
    assert rho_sup_bound(times, np.ones(11), np.zeros(11)) == pytest.approx(1.0)
    assert rho_sup_bound(times, np.exp(2.0 * times), np.full(11, -2.0)) == pytest.approx(1.0)
    assert rho_sup_bound(times, np.exp(3.0 * times), np.full(11, -2.0)) == pytest.approx(math.e)
    assert rho_sup_bound([], [], []) == 0.0


@pytest.mark.parametrize("alpha", [-1.0, 1.0])
def test_slope_follows_the_along_flow_equation(alpha):
    _, params, history, a_history = _tracked_run(alpha, 1.0)
    assert slope_ode_residual(history, params, a_history) < 1e-3


def test_short_histories_have_no_slope_residual():
    _, params, history, a_history = _tracked_run(-1.0, 1.0, horizon=0.05)
    assert slope_ode_residual(history[:2], params, a_history) == 0.0


def test_origin_slope_on_symmetric_data():
    grid = make_grid(64)
    state = SimState(0.0, sample(sine(-0.1), grid), sample(cosine(0.1, offset=0.5), grid))
    tracker = OriginSlopeTracker()
    run(state, SystemParams(alpha=-1.0, kappa=-1.0), StepControl(dt_max=1e-2), 0.2, [tracker])
    series = tracker.series()
    assert series.times[0] == 0.0
    assert series.zeta[0] == pytest.approx(-0.2 * math.pi)
    assert series.rho_origin[0] == pytest.approx(0.6)
    assert np.all(series.odd_residual < 1e-10)
    assert np.all(series.even_residual < 1e-10)
    assert series.zeta.shape == series.times.shape


def test_density_stays_zero_at_the_origin_without_dealiasing():
    grid = make_grid(128)
    state = SimState(0.0, sample(sine(-1.0), grid), sample(raised_cosine(2.0 * math.pi / math.sqrt(3.0)), grid))
    tracker = OriginSlopeTracker()
    params = SystemParams(alpha=-1.0, kappa=-1.0, dealias=False)
    run(state, params, StepControl(cfl=0.2, dt_max=2e-3), 0.15, [tracker])
    series = tracker.series()

    assert np.max(np.abs(series.rho_origin)) <= 1e-8
    assert np.all(series.odd_residual < 1e-10)
    assert np.all(series.even_residual < 1e-10)
    exact = np.asarray(riccati_exact(-2.0 * math.pi, 0.0, series.times))
    assert np.max(np.abs(series.zeta - exact) / np.abs(exact)) < 1e-3


def test_origin_slope_from_states():
    grid = make_grid(16)
    states = [SimState(0.0, sample(sine(-1.0), grid), sample(sine(1.0), grid))]
    series = track_origin_slope(states)
    assert series.zeta[0] == pytest.approx(-2.0 * math.pi)
    assert series.even_residual[0] == pytest.approx(2.0)
    assert track_origin_slope([]).times.size == 0

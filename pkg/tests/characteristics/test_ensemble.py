from __future__ import annotations

import numpy as np
import pytest

from hssim.characteristics import (
    CharacteristicEnsemble,
    CharacteristicTracker,
    InterpolationOutOfSync,
    advect,
    resolved_history,
)
from hssim.core import RealField, SimState, SystemParams, constant, cosine, make_grid, sample, sine
from hssim.evolution import StepControl, run


def _drift_state(n=16, velocity=0.3, t=0.0):
    grid = make_grid(n)
    return SimState(t, RealField.constant(grid, velocity), RealField.zeros(grid))


def test_default_seeds_are_the_grid_nodes():
    grid = make_grid(32)
    state = SimState(0.0, sample(sine(0.1), grid), sample(cosine(0.1, offset=0.5), grid))
    ensemble = CharacteristicEnsemble.seeded(state)
    assert ensemble.size == 32
    np.testing.assert_allclose(ensemble.positions, grid.points)
    np.testing.assert_allclose(ensemble.phi_x, 1.0)
    np.testing.assert_allclose(ensemble.log_jacobian, 0.0)
    np.testing.assert_allclose(ensemble.M, 0.2 * np.pi * np.cos(2.0 * np.pi * grid.points), atol=1e-12)
    np.testing.assert_allclose(ensemble.gamma, state.rho.values)


def test_explicit_seeds_are_wrapped_and_keep_their_order():
    ensemble = CharacteristicEnsemble.seeded(_drift_state(), [1.25, -0.25, 0.5])
    np.testing.assert_allclose(ensemble.seeds, [0.25, 0.75, 0.5])
    np.testing.assert_allclose(ensemble.gamma, 0.0)


def test_uniform_drift_translates_particles():
    start = _drift_state()
    ensemble = CharacteristicEnsemble.seeded(start, [0.1, 0.9])
    moved = advect(ensemble, start, _drift_state(t=0.5))
    assert moved.t == 0.5
    np.testing.assert_allclose(moved.phi, [0.25, 1.05])
    np.testing.assert_allclose(moved.positions, [0.25, 0.05], atol=1e-14)
    np.testing.assert_allclose(moved.phi_x, 1.0)


def test_advect_rejects_states_out_of_sync():
    start = _drift_state()
    ensemble = CharacteristicEnsemble.seeded(start)
    with pytest.raises(InterpolationOutOfSync):
        advect(ensemble, _drift_state(t=0.1), _drift_state(t=0.2))
    later = CharacteristicEnsemble.seeded(_drift_state(t=0.2))
    with pytest.raises(InterpolationOutOfSync):
        advect(later, _drift_state(t=0.2), _drift_state(t=0.1))


def test_tracker_follows_a_steady_drift():
    tracker = CharacteristicTracker(seeds=[0.0, 0.5], every=4)
    params = SystemParams(alpha=-1.0, kappa=1.0)
    outcome = run(_drift_state(), params, StepControl(fixed_dt=0.05), 1.0, [tracker])
    assert outcome.status == "CompletedHorizon"
    tracker.finalize()
    assert tracker.history[0].t == 0.0
    assert tracker.history[-1] is tracker.current
    assert len(tracker.history) == 6
    np.testing.assert_allclose(tracker.current.phi, [0.3, 0.8], atol=1e-12)


def test_tracker_matches_exponential_jacobian_on_a_smooth_run():
    grid = make_grid(64)
    state = SimState(0.0, sample(sine(0.5), grid), sample(constant(1.0), grid))
    tracker = CharacteristicTracker()
    run(state, SystemParams(alpha=0.0, kappa=1.0), StepControl(dt_max=5e-3), 0.5, [tracker])
    current = tracker.current
    assert current is not None
    np.testing.assert_allclose(current.phi_x, np.exp(current.log_jacobian), rtol=1e-8)
    assert np.all(current.phi_x > 0.0)


def _accelerating_state(t, n=16):
    grid = make_grid(n)
    return SimState(t, RealField.constant(grid, t * t), RealField.zeros(grid))


def test_hermite_velocity_reconstruction_is_exact_for_quadratic_motion():
    start, end = _accelerating_state(0.0), _accelerating_state(1.0)
    ensemble = CharacteristicEnsemble.seeded(start, [0.1])
    rates = (RealField.constant(start.grid, 0.0), RealField.constant(start.grid, 2.0))

    linear = advect(ensemble, start, end)
    hermite = advect(ensemble, start, end, rates=rates)

    # phi(t) = phi(0) + t^3 / 3 for u = t^2
    np.testing.assert_allclose(hermite.phi, [0.1 + 1.0 / 3.0], atol=1e-14)
    np.testing.assert_allclose(linear.phi, [0.6], atol=1e-14)


def test_tracker_with_parameters_follows_a_steady_drift():
    tracker = CharacteristicTracker(seeds=[0.0, 0.5], params=SystemParams(alpha=-1.0, kappa=1.0))
    run(_drift_state(), SystemParams(alpha=-1.0, kappa=1.0), StepControl(fixed_dt=0.05), 1.0, [tracker])
    assert tracker.current is not None
    np.testing.assert_allclose(tracker.current.phi, [0.3, 0.8], atol=1e-12)


def test_resolved_history_keeps_entries_before_the_cut():
    history = [CharacteristicEnsemble.seeded(_drift_state(t=t)) for t in (0.0, 0.1, 0.2)]

    assert resolved_history(history, None) == history
    assert [e.t for e in resolved_history(history, 0.15)] == [0.0, 0.1]
    assert [e.t for e in resolved_history(history, 0.1)] == [0.0]
    assert [e.t for e in resolved_history(history, -1.0)] == [0.0]

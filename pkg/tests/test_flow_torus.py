import math

import numpy as np
import pytest

from areaflow.errors import ConfigurationError
from areaflow.flowsim import (ScenarioConfig, initial_state, run, step_torus,
                              torus_monitors)
from areaflow.flowsim import torus
from areaflow.flowsim.runner import records_to_csv
from areaflow.flowsim.state import TorusState


def make_state(initial="sine", amplitude=0.5, resolution=24, n=2, m=2):
    config = ScenarioConfig(backend="torus", n=n, m=m, resolution=resolution,
                            initial=initial, amplitude=amplitude)
    return config, initial_state(config)


def test_constant_map_is_fixed_point():
    config, state = make_state(initial="constant")
    assert np.abs(torus.flow_velocity(state)).max() == 0.0
    rec = torus_monitors(state)
    assert rec.min_phi == 0.0 and rec.max_lambda == 0.0 and rec.sup_a2 <= 1e-12


def test_linear_map_is_fixed_point_with_expected_phi():
    config, state = make_state(initial="linear", amplitude=0.5)
    assert np.allclose(state.winding, 0.5 * np.eye(2))
    assert np.abs(torus.flow_velocity(state)).max() <= 1e-13
    rec = torus_monitors(state)
    assert math.isclose(rec.min_phi, math.log(0.6), rel_tol=1e-12)
    assert math.isclose(rec.max_two_dilation, 0.25, rel_tol=1e-12)
    assert rec.sup_a2 <= 1e-20  # flat graph
    stepped = step_torus(state, torus.max_step(state, 0.2), 0.2)
    assert np.allclose(stepped.u, state.u)


def test_cfl_enforcement():
    config, state = make_state()
    good = torus.max_step(state, 0.25)
    with pytest.raises(ConfigurationError):
        step_torus(state, 2 * good, 0.25)
    with pytest.raises(ConfigurationError):
        step_torus(state, good, cfl=0.3)


def test_flagged_state_reports_nan_phi():
    config, state = make_state(initial="linear", amplitude=1.2)
    rec = torus_monitors(state)
    assert rec.flagged
    assert math.isnan(rec.min_phi)
    assert rec.max_two_dilation >= 1.0


def test_sine_run_converges_with_monotone_phi():
    config = ScenarioConfig(backend="torus", resolution=32, initial="sine",
                            amplitude=0.5, t_max=8.0, cadence=40)
    records, verdict = run(config)
    assert verdict["outcome"] == "converged"
    assert verdict["monotonicity_violations"] == 0
    assert verdict["final_max_lambda"] < config.lambda_stop
    assert not verdict["flagged_non_area_decreasing"]
    phis = [r.min_phi for r in records]
    assert phis[-1] > phis[0]
    assert verdict["fitted_decay_rate"] > 0


def test_refinement_changes_curve_mildly():
    curves = {}
    tols = {}
    for N in (16, 32):
        config = ScenarioConfig(backend="torus", resolution=N, initial="sine",
                                amplitude=0.4, t_max=0.5,
                                cadence=5 * (N // 16) ** 2)
        records, verdict = run(config)
        curves[N] = [(r.t, r.min_phi) for r in records]
        tols[N] = verdict["monotonicity_tolerance"]
    tc, pc = zip(*curves[16])
    tf, pf = zip(*curves[32])
    drift = np.abs(np.array(pc) - np.interp(tc, tf, pf)).max()
    assert drift <= 4.0 * tols[16]


def test_general_dimensions_path():
    config = ScenarioConfig(backend="torus", n=3, m=2, resolution=12,
                            initial="sine", amplitude=0.3, t_max=0.05,
                            cadence=10)
    state = initial_state(config)
    assert state.u.shape == (2, 12, 12, 12)
    records, verdict = run(config)
    assert verdict["monotonicity_violations"] == 0
    assert records[0].max_lambda <= 0.31


def test_rk4_matches_euler_to_higher_order():
    config, state = make_state(resolution=16, amplitude=0.4)
    dt = torus.max_step(state, 0.2)
    euler = step_torus(state, dt, scheme="euler")
    rk4 = step_torus(state, dt, scheme="rk4")
    assert np.abs(euler.u - rk4.u).max() <= 10 * dt**2


def test_winding_preserved_and_periodic():
    config, state = make_state(initial="linear", amplitude=1.0, resolution=16)
    state2 = TorusState(n=2, m=2, resolution=16, winding=state.winding,
                        u=state.u + 0.1 * np.sin(np.arange(16) * 2 * np.pi / 16)[None, :, None],
                        t=0.0)
    out = step_torus(state2, torus.max_step(state2, 0.2), 0.2)
    assert np.shares_memory(out.winding, state2.winding) or np.allclose(
        out.winding, state2.winding)


def test_csv_round_trip_format():
    config = ScenarioConfig(backend="torus", resolution=16, initial="sine",
                            amplitude=0.3, t_max=0.02, cadence=2)
    records, _ = run(config)
    text = records_to_csv(records)
    lines = text.strip().split("\n")
    assert lines[0] == "t,min_phi,max_two_dilation,max_lambda,sup_A2"
    parsed = [float(x) for x in lines[1].split(",")]
    assert parsed[0] == records[0].t
    assert float(f"{records[1].min_phi:.17g}") == records[1].min_phi

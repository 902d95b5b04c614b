import math

import numpy as np
import pytest

from areaflow.errors import ConfigurationError, GraphicalBreakdownError
from areaflow.flowsim import (EquivariantState, ScenarioConfig, run,
                              step_equivariant)
from areaflow.flowsim import equivariant as eq


def profile_state(J, fn):
    r = np.linspace(0.0, math.pi, J + 1)
    return EquivariantState(resolution=J, rho=fn(r))


def test_identity_profile_is_discretely_steady():
    for J in (48, 96):
        state = profile_state(J, lambda r: r.copy())
        h_nu, h_mu, h_norm = eq.normal_velocity(state)
        assert np.abs(h_nu[1:-1]).max() <= 1.0 / J**2
        assert np.abs(h_mu).max() == 0.0


def test_zero_profile_is_fixed_point():
    state = profile_state(48, np.zeros_like)
    assert np.abs(eq.profile_velocity(state)).max() == 0.0


def test_pole_spectrum_limit():
    a = 0.3
    state = profile_state(64, lambda r: a * np.sin(r))
    lam1, lam2 = eq.profile_spectrum(state)
    # lambda_2(0) -> rho'(0) = a by the analytic limit
    assert math.isclose(lam2[0], lam1[0], rel_tol=1e-12)
    assert math.isclose(lam1[0], a, rel_tol=1e-3)
    assert np.all(lam2 >= 0)


def test_velocity_matches_closed_form_at_order_two():
    a = 0.3
    errs = {}
    for J in (64, 128, 256):
        r = np.linspace(0.0, math.pi, J + 1)
        state = EquivariantState(resolution=J, rho=a * np.sin(r))
        exact = eq.closed_form_velocity(state, rhop=a * np.cos(r),
                                        rhopp=-a * np.sin(r))
        v = eq.profile_velocity(state)
        errs[J] = np.abs(v[1:-1] - exact[1:-1]).max()
    order1 = math.log2(errs[64] / errs[128])
    order2 = math.log2(errs[128] / errs[256])
    assert order1 >= 1.5 and order2 >= 1.5


def test_mu_component_vanishes_by_symmetry():
    state = profile_state(96, lambda r: 0.4 * np.sin(r) + 0.05 * np.sin(2 * r))
    _, h_mu, h_norm = eq.normal_velocity(state)
    floor = 1e-12
    assert np.abs(h_mu[1:-1]).max() <= 1e-6 * h_norm[1:-1].max() + floor


def test_cfl_enforcement_and_breakdown():
    state = profile_state(48, lambda r: 0.2 * np.sin(r))
    with pytest.raises(ConfigurationError):
        step_equivariant(state, 1.0, 0.2)
    steep = profile_state(48, lambda r: np.zeros_like(r))
    steep.rho[10] = 500.0  # absurd kink: |rho'| explodes
    with pytest.raises(GraphicalBreakdownError):
        step_equivariant(steep, 1e-6, 0.2)


def test_sine_scenario_converges():
    config = ScenarioConfig(backend="equivariant_sphere", resolution=64,
                            initial="sine", amplitude=0.3, t_max=6.0,
                            cadence=100)
    records, verdict = run(config)
    assert verdict["outcome"] == "converged"
    assert verdict["monotonicity_violations"] == 0
    assert verdict["mu_orthogonality_max_rel"] <= 1e-6
    assert not verdict["flagged_non_area_decreasing"]
    assert records[0].max_two_dilation <= 0.09 + 1e-12
    assert verdict["final_max_lambda"] < config.lambda_stop


def test_identity_scenario_is_steady_and_flagged():
    config = ScenarioConfig(backend="equivariant_sphere", resolution=48,
                            initial="identity", t_max=0.2, cadence=20)
    records, verdict = run(config)
    assert verdict["outcome"] == "steady"
    assert verdict["flagged_non_area_decreasing"]
    assert verdict["final_min_phi"] is None
    assert math.isclose(records[0].max_lambda, 1.0, rel_tol=1e-9)


def test_initial_area_decreasing_preserved():
    config = ScenarioConfig(backend="equivariant_sphere", resolution=48,
                            initial="sine", amplitude=0.9, t_max=1.0,
                            cadence=50)
    records, verdict = run(config)
    # 0.9 sin r has pair product <= 0.81 <= 0.9: no record may flag
    assert all(not r.flagged for r in records)
    assert max(r.max_two_dilation for r in records) < 1.0

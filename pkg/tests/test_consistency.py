import numpy as np
import pytest

from areaflow.flowsim import ScenarioConfig, consistency_residuals, convergence_study
from areaflow.flowsim import initial_state, torus
from areaflow.flowsim.state import EquivariantState


def test_linear_map_residuals_vanish():
    config = ScenarioConfig(backend="torus", resolution=16, initial="linear",
                            amplitude=0.5)
    state = initial_state(config)
    res = consistency_residuals(state, torus.max_step(state, 0.2))
    for value in res.values():
        assert value <= 1e-12


def test_equivariant_backend_unsupported():
    state = EquivariantState(resolution=16, rho=np.zeros(17))
    with pytest.raises(ValueError):
        consistency_residuals(state, 1e-4)


def test_convergence_orders_reach_two():
    study = convergence_study(resolutions=(16, 32, 64), amplitude=0.25, t0=0.05)
    for key, orders in study["orders"].items():
        assert orders[-1] >= 1.5, (key, orders)
    # residuals themselves must actually shrink
    r16 = study["residuals"][16]
    r64 = study["residuals"][64]
    for key in r16:
        assert r64[key] < r16[key] / 8.0


def test_residuals_positive_on_curved_data():
    config = ScenarioConfig(backend="torus", resolution=24, initial="sine",
                            amplitude=0.4)
    state = initial_state(config)
    res = consistency_residuals(state, torus.max_step(state, 0.2))
    assert set(res) == {"evolution_trace", "evolution_square", "gradient"}
    assert all(v > 0 for v in res.values())

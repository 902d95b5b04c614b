"""Desk-scale graphical mean curvature flow.

Two backends: periodic flat-torus grids (the exact nonparametric graph
system, zero ambient curvature) and an equivariant sphere-pair profile
(rotationally symmetric maps between 2-spheres reduced to one function of
the polar angle).  Both track the monotone quantity Phi, the pointwise
spectra, and the second-fundamental-form norm.
"""

from .state import (EquivariantState, MonitorRecord, ScenarioConfig,
                    TorusState, initial_state, parse_scenario)
from .runner import run
from .torus import step_torus, torus_monitors
from .equivariant import equivariant_monitors, step_equivariant
from .consistency import consistency_residuals, convergence_study

__all__ = [
    "EquivariantState", "MonitorRecord", "ScenarioConfig", "TorusState",
    "initial_state", "parse_scenario", "run", "step_torus", "torus_monitors",
    "step_equivariant", "equivariant_monitors", "consistency_residuals",
    "convergence_study",
]

"""Flow states, monitor records, and scenario configuration."""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from ..errors import ConfigurationError

CFL_MAX = 0.25


@dataclass
class TorusState:
    """Periodic graph map T^n -> T^m, stored as winding + periodic residual.

    The lift is f(x) = winding @ x + u(x); the flow equation acts on the
    lift, so any real-valued winding matrix is admissible (integer windings
    are the homotopically distinct classes).
    """

    n: int
    m: int
    resolution: int
    winding: np.ndarray          # (m, n)
    u: np.ndarray                # (m, N, ..., N) periodic residual
    t: float = 0.0
    steps: int = 0

    @property
    def h(self):
        return 2.0 * math.pi / self.resolution

    backend = "torus"


@dataclass
class EquivariantState:
    """Rotationally symmetric sphere-pair profile rho(r) on r_j = j pi / J.

    rho(0) = 0 and rho(pi) is 0 (trivial class) or pi (identity class);
    both poles are held fixed and ghost values extend the profile by odd
    reflection about the pole values.
    """

    resolution: int              # J: number of intervals
    rho: np.ndarray              # (J + 1,)
    t: float = 0.0
    steps: int = 0

    @property
    def h(self):
        return math.pi / self.resolution

    @property
    def r(self):
        return np.linspace(0.0, math.pi, self.resolution + 1)

    backend = "equivariant_sphere"


@dataclass(frozen=True)
class MonitorRecord:
    t: float
    min_phi: float               # NaN sentinel when flagged
    max_two_dilation: float
    max_lambda: float
    sup_a2: float
    flagged: bool = False
    residual_evol_s: float | None = None

    def row(self):
        return (self.t, self.min_phi, self.max_two_dilation,
                self.max_lambda, self.sup_a2)


@dataclass(frozen=True)
class ScenarioConfig:
    backend: str = "torus"
    n: int = 2
    m: int = 2
    resolution: int = 64
    initial: str = "sine"
    amplitude: float = 0.5
    cfl: float = 0.2
    t_max: float = 8.0
    lambda_stop: float = 1e-3
    cadence: int = 25
    monotonicity_c: float = 10.0   # per-step tolerance C*(h^2 + dt); artifact calibration
    steady_c: float = 1.0          # steady threshold C*h^2; artifact calibration
    scheme: str = "euler"
    plots: bool = False

    def __post_init__(self):
        if self.backend not in ("torus", "equivariant_sphere"):
            raise ConfigurationError(f"unknown backend {self.backend!r}")
        if self.backend == "equivariant_sphere" and (self.n, self.m) != (2, 2):
            raise ConfigurationError("equivariant backend is the sphere pair n = m = 2")
        if not 0 < self.cfl <= CFL_MAX:
            raise ConfigurationError(f"cfl must lie in (0, {CFL_MAX}]")
        if self.scheme not in ("euler", "rk4"):
            raise ConfigurationError("scheme must be euler or rk4")
        if self.resolution < 8:
            raise ConfigurationError("resolution must be at least 8")


_BOOL = {"true": True, "false": False, "yes": True, "no": False, "1": True, "0": False}
_FIELD_TYPES = {
    "backend": str, "n": int, "m": int, "resolution": int, "initial": str,
    "amplitude": float, "cfl": float, "t_max": float, "lambda_stop": float,
    "cadence": int, "monotonicity_c": float, "steady_c": float,
    "scheme": str, "plots": bool,
}


def parse_scenario(source) -> ScenarioConfig:
    """Parse a plain-text key = value scenario (path or string).

    Lines starting with # are comments; keys are the ScenarioConfig fields.
    """
    if isinstance(source, (str, Path)) and "\n" not in str(source):
        text = Path(source).read_text()
    else:
        text = str(source)
    values = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigurationError(f"line {lineno}: expected key = value, got {raw!r}")
        key, _, val = line.partition("=")
        key = key.strip().lower().replace("-", "_")
        val = val.strip()
        if key not in _FIELD_TYPES:
            raise ConfigurationError(f"line {lineno}: unknown key {key!r}")
        caster = _FIELD_TYPES[key]
        if caster is bool:
            if val.lower() not in _BOOL:
                raise ConfigurationError(f"line {lineno}: bad boolean {val!r}")
            values[key] = _BOOL[val.lower()]
        else:
            try:
                values[key] = caster(val)
            except ValueError as exc:
                raise ConfigurationError(f"line {lineno}: {exc}") from exc
    return ScenarioConfig(**values)


def _torus_initial(config: ScenarioConfig) -> TorusState:
    n, m, N = config.n, config.m, config.resolution
    axes = [np.arange(N) * (2.0 * math.pi / N) for _ in range(n)]
    grid = np.meshgrid(*axes, indexing="ij")
    u = np.zeros((m,) + (N,) * n)
    winding = np.zeros((m, n))
    if config.initial == "sine":
        # f^a = amplitude * sin(x^a) on the shared axes
        for a in range(m):
            u[a] = config.amplitude * np.sin(grid[a % n])
    elif config.initial == "linear":
        # lift f = amplitude * x; pure winding, zero residual
        for a in range(min(m, n)):
            winding[a, a] = config.amplitude
    elif config.initial == "constant":
        pass
    else:
        raise ConfigurationError(f"unknown torus initial data {config.initial!r}")
    return TorusState(n=n, m=m, resolution=N, winding=winding, u=u)


def _equivariant_initial(config: ScenarioConfig) -> EquivariantState:
    J = config.resolution
    r = np.linspace(0.0, math.pi, J + 1)
    if config.initial == "sine":
        rho = config.amplitude * np.sin(r)
    elif config.initial == "identity":
        rho = r.copy()
    elif config.initial == "zero":
        rho = np.zeros(J + 1)
    else:
        raise ConfigurationError(f"unknown equivariant initial data {config.initial!r}")
    return EquivariantState(resolution=J, rho=rho)


def initial_state(config: ScenarioConfig):
    if config.backend == "torus":
        return _torus_initial(config)
    return _equivariant_initial(config)

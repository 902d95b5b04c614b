"""Time-stepping driver: monotonicity bookkeeping, verdicts, and output."""

from __future__ import annotations

import math

import numpy as np

from ..errors import DivergenceError
from . import equivariant, torus
from .state import (EquivariantState, MonitorRecord, ScenarioConfig,
                    TorusState, initial_state)


def _light_min_phi(state):
    """Cheap per-step (min_phi, flagged) without |A|^2."""
    if isinstance(state, TorusState):
        df = torus.first_derivatives(state)
        min_phi, _, max_lam, flagged = torus.pointwise_phi_stats(df)
        return min_phi, max_lam, flagged
    lam1, lam2 = equivariant.profile_spectrum(state)
    pair = lam1 * lam2
    flagged = bool((pair**2 >= 1.0 - 1e-14).any())
    with np.errstate(invalid="ignore", divide="ignore"):
        phi = np.log1p(-(pair**2)) - np.log1p(lam1**2) - np.log1p(lam2**2)
    min_phi = float("nan") if flagged else float(phi.min())
    return min_phi, float(max(lam1.max(), lam2.max())), flagged


def _monitor(state):
    if isinstance(state, TorusState):
        return torus.torus_monitors(state)
    return equivariant.equivariant_monitors(state)


def _velocity_max(state):
    if isinstance(state, TorusState):
        return float(np.abs(torus.flow_velocity(state)).max())
    return float(np.abs(equivariant.profile_velocity(state)).max())


def fitted_decay_rate(times, min_phis):
    """Least-squares slope of log(-min_phi) over the tail half of the run.

    Reported, not asserted: the theory guarantees some exponential rate but
    only proves its existence.
    """
    t = np.asarray(times)
    y = -np.asarray(min_phis)
    keep = np.isfinite(y) & (y > 1e-300)
    t, y = t[keep], y[keep]
    if t.size < 4:
        return None
    half = t.size // 2
    t, y = t[half:], np.log(y[half:])
    if np.ptp(t) == 0:
        return None
    slope = np.polyfit(t, y, 1)[0]
    return float(-slope)


def run(config: ScenarioConfig, state=None):
    """Run a scenario to convergence, steadiness, or t_max.

    Returns (records, verdict): the cadence-sampled MonitorRecord series and
    a dict with the outcome, the count of min-Phi monotonicity violations
    beyond C (h^2 + dt), the fitted tail decay rate of -min Phi, and the
    equivariant symmetry self-check when applicable.
    """
    if state is None:
        state = initial_state(config)
    if isinstance(state, TorusState):
        dt = torus.max_step(state, config.cfl)
        stepper = lambda s: torus.step_torus(s, dt, config.cfl, config.scheme)
    else:
        dt = config.cfl * state.h**2
        stepper = lambda s: equivariant.step_equivariant(s, dt, config.cfl, config.scheme)
    tol = config.monotonicity_c * (state.h**2 + dt)
    steady_tol = config.steady_c * state.h**2

    records = [_monitor(state)]
    prev_phi, _, ever_flagged = _light_min_phi(state)
    violations = 0
    worst_drop = 0.0
    mu_rel_max = 0.0
    outcome = "timeout"
    light_t = [state.t]
    light_phi = [prev_phi]

    while state.t < config.t_max - 1e-15:
        try:
            state = stepper(state)
        except DivergenceError as exc:
            outcome = "diverged"
            if exc.last_record is not None:
                records.append(exc.last_record)
            break
        min_phi, max_lam, flagged = _light_min_phi(state)
        ever_flagged = ever_flagged or flagged
        if not (math.isnan(min_phi) or math.isnan(prev_phi)):
            drop = prev_phi - min_phi
            worst_drop = max(worst_drop, drop)
            if drop > tol:
                violations += 1
        prev_phi = min_phi
        light_t.append(state.t)
        light_phi.append(min_phi)
        if state.steps % config.cadence == 0:
            records.append(_monitor(state))
            if isinstance(state, EquivariantState):
                h_nu, h_mu, h_norm = equivariant.normal_velocity(state)
                floor = 1e-12 + 1e-9 * state.h**2
                rel = np.abs(h_mu[1:-1]) / (np.abs(h_norm[1:-1]) + floor)
                mu_rel_max = max(mu_rel_max, float(rel.max()))
        if max_lam < config.lambda_stop:
            outcome = "converged"
            break

    if records[-1].t != state.t and outcome != "diverged":
        records.append(_monitor(state))
    if outcome == "timeout" and _velocity_max(state) <= steady_tol:
        outcome = "steady"

    final_phi = records[-1].min_phi
    verdict = {
        "outcome": outcome,
        "backend": config.backend,
        "resolution": config.resolution,
        "dt": dt,
        "t_final": state.t,
        "steps": state.steps,
        "monotonicity_tolerance": tol,
        "monotonicity_violations": violations,
        "worst_min_phi_drop": worst_drop,
        "fitted_decay_rate": fitted_decay_rate(light_t, light_phi),
        "flagged_non_area_decreasing": ever_flagged,
        "final_max_lambda": records[-1].max_lambda,
        # NaN is the flagged sentinel; JSON carries it as null
        "final_min_phi": None if math.isnan(final_phi) else final_phi,
    }
    if config.backend == "equivariant_sphere":
        verdict["mu_orthogonality_max_rel"] = mu_rel_max
    return records, verdict


def records_to_csv(records) -> str:
    """Full round-trip decimal formatting (17 significant digits)."""
    lines = ["t,min_phi,max_two_dilation,max_lambda,sup_A2"]
    for rec in records:
        lines.append(",".join(f"{v:.17g}" for v in rec.row()))
    return "\n".join(lines) + "\n"


def records_to_svg(records, field="min_phi") -> str:
    """Minimal SVG line plot of a monitor field versus time."""
    pts = [(rec.t, getattr(rec, field)) for rec in records
           if math.isfinite(getattr(rec, field))]
    width, height, margin = 640, 400, 50
    if len(pts) < 2:
        body = "<text x='20' y='40'>not enough finite data</text>"
        return (f"<svg xmlns='http://www.w3.org/2000/svg' width='{width}' "
                f"height='{height}'>{body}</svg>\n")
    ts = [p[0] for p in pts]
    vs = [p[1] for p in pts]
    t0, t1 = min(ts), max(ts)
    v0, v1 = min(vs), max(vs)
    span_t = (t1 - t0) or 1.0
    span_v = (v1 - v0) or 1.0

    def sx(t):
        return margin + (t - t0) / span_t * (width - 2 * margin)

    def sy(v):
        return height - margin - (v - v0) / span_v * (height - 2 * margin)

    path = " ".join(f"{sx(t):.2f},{sy(v):.2f}" for t, v in pts)
    return (
        f"<svg xmlns='http://www.w3.org/2000/svg' width='{width}' height='{height}'>\n"
        f"  <rect width='100%' height='100%' fill='white'/>\n"
        f"  <polyline points='{path}' fill='none' stroke='black' stroke-width='1.5'/>\n"
        f"  <text x='{width // 2}' y='{height - 10}' text-anchor='middle'>t</text>\n"
        f"  <text x='12' y='{height // 2}' transform='rotate(-90 12 {height // 2})' "
        f"text-anchor='middle'>{field}</text>\n"
        f"</svg>\n"
    )

"""Equivariant sphere-pair backend.

A rotationally symmetric map between unit 2-spheres is the profile rho(r) of
the polar angle; its graph sits in S^2 x S^2 embedded in R^6 as

    X(r, theta) = (cos r, sin r cos th, sin r sin th,
                   cos rho, sin rho cos th, sin rho sin th).

The normal velocity is computed geometrically: Euclidean second-derivative
vectors of X by finite differences along the meridian (theta-derivatives are
closed-form), minus their components along the two sphere normals (p, 0) and
(0, q), minus the tangential part, traced with the inverse induced metric
diag(1 + rho'^2, sin^2 r + sin^2 rho).  By the reflection symmetry
theta -> -theta the mean curvature is parallel to

    nu = (-rho' p_r, q_rho) / sqrt(1 + rho'^2),

so the profile obeys d rho/dt = sqrt(1 + rho'^2) <H, nu>; the component
along the other unit normal mu (the theta-direction combination) is
monitored as a symmetry self-check.

Singular values: lambda_1 = |rho'|, lambda_2 = |sin rho / sin r| with the
pole limit lambda_2 = |rho'| at r in {0, pi}.
"""

from __future__ import annotations

import numpy as np

from ..errors import ConfigurationError, DivergenceError, GraphicalBreakdownError
from .state import CFL_MAX, EquivariantState, MonitorRecord

RHO_PRIME_BREAKDOWN = 1e3


def _extended(state: EquivariantState, ghosts: int = 1):
    """Profile with ghost nodes per pole, by odd reflection about the fixed
    pole values rho(0) = 0 and rho(pi) in {0, pi}."""
    rho = state.rho
    left = -rho[ghosts:0:-1]
    right = 2.0 * rho[-1] - rho[-2:-2 - ghosts:-1]
    return np.concatenate([left, rho, right])


def profile_derivative(state: EquivariantState) -> np.ndarray:
    """Fourth-order centered rho'.

    Second-order accuracy is not enough here: the theta-trace term carries a
    1/sin(r) amplification at the pole-adjacent nodes, which would degrade
    the velocity operator to first order in the max norm.
    """
    ext = _extended(state, ghosts=2)
    J = state.resolution
    j = np.arange(J + 1) + 2
    return (-ext[j + 2] + 8.0 * ext[j + 1] - 8.0 * ext[j - 1] + ext[j - 2]) \
        / (12.0 * state.h)


def _geometry(state: EquivariantState):
    """Per-node frames and projected second-derivative vectors at theta = 0.

    Second derivatives along the meridian come from centered differences of
    the embedding; tangents are assembled from the (fourth-order) profile
    derivative, which keeps the theta-trace term second-order accurate at
    the pole-adjacent nodes.
    """
    J = state.resolution
    dr = state.h
    r = state.r
    rho = state.rho
    ext_rho = _extended(state)
    ext_r = np.concatenate([[-r[1]], r, [2.0 * r[-1] - r[-2]]])

    def embed(rr, pp):
        z = np.zeros_like(rr)
        return np.stack([np.cos(rr), np.sin(rr), z, np.cos(pp), np.sin(pp), z], axis=-1)

    X = embed(ext_r, ext_rho)
    Xc, Xp, Xm = X[1:-1], X[2:], X[:-2]
    rhop = profile_derivative(state)
    X_rr = (Xp - 2.0 * Xc + Xm) / dr**2
    sr, sp = np.sin(r), np.sin(rho)
    zeros = np.zeros_like(r)
    pr = np.stack([-sr, np.cos(r), zeros], axis=-1)
    qr = np.stack([-sp, np.cos(rho), zeros], axis=-1)
    X_r = np.concatenate([pr, rhop[:, None] * qr], axis=-1)
    X_tt = np.stack([zeros, -sr, zeros, zeros, -sp, zeros], axis=-1)
    X_rt = np.stack([zeros, zeros, np.cos(r), zeros, zeros,
                     rhop * np.cos(rho)], axis=-1)
    X_t = np.stack([zeros, zeros, sr, zeros, zeros, sp], axis=-1)
    n1 = np.concatenate([Xc[:, :3], np.zeros((J + 1, 3))], axis=-1)
    n2 = np.concatenate([np.zeros((J + 1, 3)), Xc[:, 3:]], axis=-1)
    g_rr = 1.0 + rhop**2
    g_tt = sr**2 + sp**2
    # pole rows are coordinate-singular; they are masked by callers
    safe_tt = np.where(g_tt > 1e-300, g_tt, 1.0)
    t1 = X_r / np.sqrt(g_rr)[:, None]
    t2 = X_t / np.sqrt(safe_tt)[:, None]

    def project(V):
        for unit in (n1, n2, t1, t2):
            V = V - np.einsum("ij,ij->i", V, unit)[:, None] * unit
        return V

    II_rr = project(X_rr)
    II_tt = project(X_tt)
    II_rt = project(X_rt)
    nu = np.concatenate([-rhop[:, None] * pr, qr], axis=-1) / np.sqrt(g_rr)[:, None]
    mu = np.stack([zeros, zeros, -sp, zeros, zeros, sr], axis=-1) / np.sqrt(safe_tt)[:, None]
    return {"rhop": rhop, "g_rr": g_rr, "g_tt": g_tt, "II_rr": II_rr,
            "II_tt": II_tt, "II_rt": II_rt, "nu": nu, "mu": mu}


def normal_velocity(state: EquivariantState):
    """(<H, nu>, <H, mu>, |H|) at every node (poles zeroed)."""
    geo = _geometry(state)
    inner = slice(1, -1)
    H = np.zeros((state.resolution + 1, 6))
    H[inner] = (geo["II_rr"][inner] / geo["g_rr"][inner, None]
                + geo["II_tt"][inner] / geo["g_tt"][inner, None])
    h_nu = np.einsum("ij,ij->i", H, geo["nu"])
    h_mu = np.einsum("ij,ij->i", H, geo["mu"])
    h_norm = np.linalg.norm(H, axis=-1)
    h_nu[0] = h_nu[-1] = 0.0
    h_mu[0] = h_mu[-1] = 0.0
    return h_nu, h_mu, h_norm


def profile_velocity(state: EquivariantState) -> np.ndarray:
    """d rho / dt = sqrt(1 + rho'^2) <H, nu>, zero at the poles."""
    h_nu, _, _ = normal_velocity(state)
    rhop = profile_derivative(state)
    v = np.sqrt(1.0 + rhop**2) * h_nu
    v[0] = v[-1] = 0.0
    return v


def closed_form_velocity(state: EquivariantState, rhop=None, rhopp=None) -> np.ndarray:
    """Analytic profile velocity for smooth profiles (oracle for the
    finite-difference route):

        rho'' / (1 + rho'^2)
        + (rho' sin r cos r - sin rho cos rho) / (sin^2 r + sin^2 rho).

    Derivatives default to grid differences; callers with analytic profiles
    can pass exact arrays to isolate the geometric pipeline's truncation
    error.  Poles return zero.
    """
    r = state.r
    rho = state.rho
    if rhop is None:
        rhop = profile_derivative(state)
    if rhopp is None:
        ext = _extended(state)
        rhopp = (ext[2:] - 2.0 * ext[1:-1] + ext[:-2]) / state.h**2
    den = np.sin(r) ** 2 + np.sin(rho) ** 2
    out = np.zeros_like(rho)
    inner = slice(1, -1)
    out[inner] = (rhopp[inner] / (1.0 + rhop[inner] ** 2)
                  + (rhop[inner] * np.sin(r[inner]) * np.cos(r[inner])
                     - np.sin(rho[inner]) * np.cos(rho[inner])) / den[inner])
    return out


def max_step(state: EquivariantState, cfl: float) -> float:
    rhop = profile_derivative(state)
    return cfl * state.h**2 * float(np.min(1.0 + rhop**2))


def step_equivariant(state: EquivariantState, dt: float, cfl: float = CFL_MAX,
                     scheme: str = "euler") -> EquivariantState:
    """One explicit step of the profile flow; the CFL budget folds in the
    meridian metric coefficient 1/(1 + rho'^2)."""
    if not 0 < cfl <= CFL_MAX:
        raise ConfigurationError(f"cfl must lie in (0, {CFL_MAX}]")
    rhop = profile_derivative(state)
    if np.abs(rhop).max() > RHO_PRIME_BREAKDOWN:
        raise GraphicalBreakdownError("profile derivative blow-up",
                                      last_record=equivariant_monitors(state))
    if dt > max_step(state, cfl) * (1 + 1e-12):
        raise ConfigurationError(
            f"dt = {dt:g} violates the equivariant CFL bound {max_step(state, cfl):g}")
    if scheme == "euler":
        rho_new = state.rho + dt * profile_velocity(state)
    elif scheme == "rk4":
        def vel(rho):
            return profile_velocity(EquivariantState(state.resolution, rho))
        k1 = vel(state.rho)
        k2 = vel(state.rho + 0.5 * dt * k1)
        k3 = vel(state.rho + 0.5 * dt * k2)
        k4 = vel(state.rho + dt * k3)
        rho_new = state.rho + dt / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4)
    else:
        raise ConfigurationError(f"unknown scheme {scheme!r}")
    if not np.all(np.isfinite(rho_new)):
        raise DivergenceError("non-finite values in equivariant flow",
                              last_record=equivariant_monitors(state))
    return EquivariantState(resolution=state.resolution, rho=rho_new,
                            t=state.t + dt, steps=state.steps + 1)


def profile_spectrum(state: EquivariantState):
    """(lambda_1, lambda_2) fields: |rho'| and |sin rho / sin r| with the
    analytic pole limit lambda_2 = |rho'|."""
    r = state.r
    rhop = profile_derivative(state)
    lam1 = np.abs(rhop)
    sr = np.sin(r)
    lam2 = np.empty_like(lam1)
    interior = sr > 1e-12
    lam2[interior] = np.abs(np.sin(state.rho[interior]) / sr[interior])
    lam2[~interior] = lam1[~interior]
    return lam1, lam2


def second_fundamental_norm_sq(state: EquivariantState) -> np.ndarray:
    """|A|^2 on interior nodes (poles excluded) from the projected
    second-derivative vectors."""
    geo = _geometry(state)
    inner = slice(1, -1)
    a_rr = np.einsum("ij,ij->i", geo["II_rr"], geo["II_rr"])[inner]
    a_tt = np.einsum("ij,ij->i", geo["II_tt"], geo["II_tt"])[inner]
    a_rt = np.einsum("ij,ij->i", geo["II_rt"], geo["II_rt"])[inner]
    grr = geo["g_rr"][inner]
    gtt = geo["g_tt"][inner]
    return a_rr / grr**2 + 2.0 * a_rt / (grr * gtt) + a_tt / gtt**2


def equivariant_monitors(state: EquivariantState) -> MonitorRecord:
    lam1, lam2 = profile_spectrum(state)
    pair = lam1 * lam2
    flagged = bool((pair**2 >= 1.0 - 1e-14).any())
    with np.errstate(invalid="ignore", divide="ignore"):
        phi = np.log1p(-(pair**2)) - np.log1p(lam1**2) - np.log1p(lam2**2)
    min_phi = float("nan") if flagged else float(phi.min())
    sup_a2 = float(second_fundamental_norm_sq(state).max())
    return MonitorRecord(t=state.t, min_phi=min_phi,
                         max_two_dilation=float(pair.max()),
                         max_lambda=float(max(lam1.max(), lam2.max())),
                         sup_a2=sup_a2, flagged=flagged)

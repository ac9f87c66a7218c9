"""Reference 1D compressible Navier-Stokes-Fourier solver.

Setting the relaxation moduli to zero in the Sigma, sigma and q balance laws
and keeping only x-dependence slaves the dissipative fields to the gradients:

    d/dx (B_m)_{11} u = -Sigma_m/(2 eta)   =>  Sigma_11 = -(4/3) eta u_x
    d/dx u            = -sigma/(3 zeta)    =>  sigma    = -3 zeta u_x
    d/dx theta        = -q_1/chi           =>  q_1      = -chi theta_x

so the momentum flux carries -mu_eff u_x with mu_eff = (4/3) eta + 3 zeta and
the energy flux carries -mu_eff u u_x - chi theta_x.

Discretisation: Rusanov flux on linearly reconstructed primitive variables,
centred differences for the viscous and heat fluxes, SSP-RK2 in time.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, NumericalError
from .solver import Grid1D, Trajectory, limited_slope


@dataclass(frozen=True)
class NsfCoefficients:
    eta: float
    zeta: float
    chi: float

    @property
    def mu_eff(self):
        return 4.0 / 3.0 * self.eta + 3.0 * self.zeta

    @classmethod
    def from_relaxation(cls, rp):
        return cls(rp.eta, rp.zeta, rp.chi)


@dataclass
class NsfState1D:
    grid: Grid1D
    W: np.ndarray  # (n, 3): rho, rho u, E
    t: float = 0.0

    def primitive(self, eos):
        return primitive(self.W, eos)

    def totals(self):
        return self.W.sum(axis=0) * self.grid.dx


def conservative(rho, u, theta, eos):
    rho = np.asarray(rho, dtype=float)
    W = np.empty(rho.shape + (3,))
    W[..., 0] = rho
    W[..., 1] = rho * u
    W[..., 2] = rho * eos.cv * theta + 0.5 * rho * u * u
    return W


def primitive(W, eos):
    rho = W[..., 0]
    u = W[..., 1] / rho
    theta = (W[..., 2] / rho - 0.5 * u * u) / eos.cv
    return rho, u, theta


def nsf_closure(u, theta, coeffs, dx):
    """Dissipative fields (Sigma11, sigma, q1) of the limit closure, centred differences."""
    ux = (np.roll(u, -1) - np.roll(u, 1)) / (2.0 * dx)
    thx = (np.roll(theta, -1) - np.roll(theta, 1)) / (2.0 * dx)
    return -4.0 / 3.0 * coeffs.eta * ux, -3.0 * coeffs.zeta * ux, -coeffs.chi * thx


def _euler_flux(rho, u, theta, eos):
    p = rho * eos.R * theta
    E = rho * eos.cv * theta + 0.5 * rho * u * u
    return np.stack([rho * u, rho * u * u + p, (E + p) * u], axis=-1)


def rhs(W, grid, eos, coeffs, limiter="none"):
    dx = grid.dx
    rho, u, theta = primitive(W, eos)
    P = np.stack([rho, u, theta], axis=-1)
    slope = limited_slope(P, limiter)
    PL = P + 0.5 * slope
    PR = np.roll(P - 0.5 * slope, -1, axis=0)
    WL = conservative(PL[:, 0], PL[:, 1], PL[:, 2], eos)
    WR = conservative(PR[:, 0], PR[:, 1], PR[:, 2], eos)
    with np.errstate(invalid="ignore"):  # negative face temperatures are caught by _check
        sL = np.abs(PL[:, 1]) + eos.sound_speed(PL[:, 2])
        sR = np.abs(PR[:, 1]) + eos.sound_speed(PR[:, 2])
    s = np.maximum(sL, sR)
    F = 0.5 * (_euler_flux(*PL.T, eos) + _euler_flux(*PR.T, eos)) - 0.5 * s[:, None] * (WR - WL)

    u_next = np.roll(u, -1)
    ux = (u_next - u) / dx
    thx = (np.roll(theta, -1) - theta) / dx
    u_face = 0.5 * (u + u_next)
    F[:, 1] -= coeffs.mu_eff * ux
    F[:, 2] -= coeffs.mu_eff * u_face * ux + coeffs.chi * thx
    return -(F - np.roll(F, 1, axis=0)) / dx


def stable_dt(state, eos, coeffs, cfl=0.5):
    _check(state.W, eos, state.t)
    rho, u, theta = state.primitive(eos)
    dx = state.grid.dx
    s = float(np.max(np.abs(u) + eos.sound_speed(theta)))
    nu = float(np.max(np.maximum(coeffs.mu_eff / rho, coeffs.chi / (rho * eos.cv))))
    dt_hyp = dx / s
    dt_par = 0.5 * dx * dx / nu if nu > 0 else np.inf
    return cfl * min(dt_hyp, dt_par)


def nsf_step(state, dt, eos, coeffs, grid=None, limiter="none"):
    """One SSP-RK2 step of the conservative update."""
    grid = grid or state.grid
    W = state.W
    _check(W, eos, state.t)
    W1 = W + dt * rhs(W, grid, eos, coeffs, limiter)
    _check(W1, eos, state.t)
    W2 = 0.5 * W + 0.5 * (W1 + dt * rhs(W1, grid, eos, coeffs, limiter))
    _check(W2, eos, state.t)
    return NsfState1D(grid, W2, state.t + dt)


def _check(W, eos, t):
    rho, _, theta = primitive(W, eos)
    bad = ~((rho > 0) & (theta > 0) & np.isfinite(theta))
    if np.any(bad):
        i = int(np.flatnonzero(bad)[0])
        raise NumericalError(f"NSF positivity lost at t={t:.6g}, cell {i}: W={W[i].tolist()}")


def snapshot_columns(state, eos, coeffs):
    rho, u, theta = state.primitive(eos)
    S11, sig, q1 = nsf_closure(u, theta, coeffs, state.grid.dx)
    return {
        "x": state.grid.centers,
        "rho": rho,
        "u1": u,
        "theta": theta,
        "Sigma11": S11,
        "sigma": sig,
        "q1": q1,
    }


def total_entropy(state, eos):
    """Integral of rho s with s = c_v ln theta - R ln rho."""
    rho, _, theta = state.primitive(eos)
    return float(np.sum(rho * (eos.cv * np.log(theta) - eos.R * np.log(rho))) * state.grid.dx)


def integrate(state, t_end, eos, coeffs, cfl=0.5, limiter="none", every=None, record=None):
    """Advance to ``t_end``; snapshot cadence as in :func:`rshs.solver.integrate`."""
    if not 0.0 < cfl <= 0.9:
        raise ConfigError(f"cfl must lie in (0, 0.9], got {cfl}")
    if record is None:
        record = lambda s: snapshot_columns(s, eos, coeffs)  # noqa: E731
    traj = Trajectory()
    traj.times.append(state.t)
    traj.snapshots.append(record(state))
    next_out = state.t + every if every else np.inf
    while state.t < t_end * (1.0 - 1e-14):
        dt = stable_dt(state, eos, coeffs, cfl)
        target = min(t_end, next_out)
        clipped = state.t + dt >= target
        if clipped:
            dt = target - state.t
        state = nsf_step(state, dt, eos, coeffs, limiter=limiter)
        if clipped:
            state.t = target
        traj.steps += 1
        hit_out = bool(every) and abs(state.t - next_out) <= 1e-12 * max(1.0, abs(next_out))
        if hit_out:
            next_out += every
        if hit_out or state.t >= t_end * (1.0 - 1e-14):
            if state.t > traj.times[-1]:
                traj.times.append(state.t)
                traj.snapshots.append(record(state))
    traj.final = state
    return traj

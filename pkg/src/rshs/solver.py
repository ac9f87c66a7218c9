"""Finite-volume IMEX solver for the relaxation system in one space dimension.

Planar symmetry: fields depend on x = x^1 and t only, but the full 14-component
state is carried.  The conserved vector U = grad X0 is advanced; Godunov
variables are recovered cell by cell with a damped Newton iteration on the
SPD symmetriser, warm-started from the previous solution.

Time stepping is Strang splitting: half relaxation step, explicit transport
step (Rusanov, first or second order), half relaxation step.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError, InversionError, NumericalError
from .potentials import entropy_production, flux_dir, grad_x0, hess_x0, x0
from .state import BULK, DEV, DEV_BASIS, HEAT, NVARS, THETA, PhysicalState, from_godunov, to_godunov
from .structure import spectral_radius

log = logging.getLogger(__name__)

E1 = np.array([1.0, 0.0, 0.0])


@dataclass(frozen=True)
class Grid1D:
    n_cells: int
    x_min: float = 0.0
    x_max: float = 1.0

    def __post_init__(self):
        if int(self.n_cells) <= 3:
            raise ConfigError(f"need more than 3 cells, got {self.n_cells}")
        if not self.x_max > self.x_min:
            raise ConfigError("x_max must exceed x_min")

    @property
    def length(self):
        return self.x_max - self.x_min

    @property
    def dx(self):
        return self.length / self.n_cells

    @property
    def centers(self):
        return self.x_min + (np.arange(self.n_cells) + 0.5) * self.dx

    def ddx(self, f):
        """Periodic centred first derivative along axis 0."""
        return (np.roll(f, -1, axis=0) - np.roll(f, 1, axis=0)) / (2.0 * self.dx)


@dataclass
class Field1D:
    grid: Grid1D
    U: np.ndarray
    Y: np.ndarray
    t: float = 0.0

    def copy(self):
        return Field1D(self.grid, self.U.copy(), self.Y.copy(), self.t)

    def physical(self, eos, rp):
        return from_godunov(self.Y, eos, rp)

    def totals(self):
        """Cell sums (times dx) of all conserved components."""
        return self.U.sum(axis=0) * self.grid.dx


# ---------------------------------------------------------------- inversion


def conserved_to_godunov(U, guess, eos, rp, tol=1e-12, max_iter=50):
    """Recover Godunov variables from conserved ones by damped Newton.

    Solves grad_x0(Y) = U, i.e. minimises the convex function X0(Y) - U.Y.
    Steps are halved until theta_t stays negative and the objective (or the
    residual) decreases.
    """
    U = np.asarray(U, dtype=float)
    Y = np.array(np.broadcast_to(guess, U.shape), dtype=float)
    scalar = U.ndim == 1
    if scalar:
        U, Y = U[None], Y[None]
    bad = ~(U[:, 0] > 0.0) | ~np.all(np.isfinite(U), axis=1)
    if np.any(bad):
        raise InversionError("conserved mass density must be positive and finite", np.flatnonzero(bad), U[bad])
    if not np.all(Y[:, THETA] < 0.0):
        raise InversionError("initial guess has theta_t >= 0", np.flatnonzero(Y[:, THETA] >= 0.0))
    Unorm = np.linalg.norm(U, axis=1)

    active = np.arange(U.shape[0])
    G = grad_x0(Y, eos, rp) - U
    for _ in range(max_iter + 1):
        res = np.linalg.norm(G[active], axis=1)
        conv = res <= tol * Unorm[active]
        active = active[~conv]
        if active.size == 0:
            return Y[0] if scalar else Y
        Ya, Ua, Ga = Y[active], U[active], G[active]
        H = hess_x0(Ya, eos, rp)
        try:
            step = -np.linalg.solve(H, Ga[..., None])[..., 0]
        except np.linalg.LinAlgError:
            raise InversionError("singular symmetriser during inversion", active, Ua) from None
        phi0 = x0(Ya, eos, rp) - np.sum(Ua * Ya, axis=1)
        slope = np.sum(Ga * step, axis=1)
        res0 = np.linalg.norm(Ga, axis=1)
        lam = np.ones(active.size)
        todo = np.ones(active.size, dtype=bool)
        Ynew = Ya.copy()
        Gnew = Ga.copy()
        for _ in range(40):
            idx = np.flatnonzero(todo)
            if idx.size == 0:
                break
            cand = Ya[idx] + lam[idx, None] * step[idx]
            ok = cand[:, THETA] < 0.0
            phi = np.full(idx.size, np.inf)
            g = np.full((idx.size, NVARS), np.inf)
            if np.any(ok):
                with np.errstate(over="ignore", invalid="ignore"):
                    c_ok = cand[ok]
                    phi[ok] = x0(c_ok, eos, rp) - np.sum(Ua[idx[ok]] * c_ok, axis=1)
                    g[ok] = grad_x0(c_ok, eos, rp) - Ua[idx[ok]]
            with np.errstate(over="ignore", invalid="ignore"):
                rnew = np.linalg.norm(g, axis=1)
            accept = (
                ok
                & np.isfinite(phi)
                & np.isfinite(rnew)
                & ((phi <= phi0[idx] + 1e-4 * lam[idx] * slope[idx]) | (rnew < res0[idx]))
            )
            Ynew[idx[accept]] = cand[accept]
            Gnew[idx[accept]] = g[accept]
            todo[idx[accept]] = False
            lam[idx[~accept]] *= 0.5
        if np.any(todo):
            stuck = active[todo]
            raise InversionError(
                f"line search failed in {stuck.size} cell(s)", stuck if not scalar else (), U[stuck]
            )
        Y[active] = Ynew
        G[active] = Gnew
    raise InversionError(
        f"Newton did not converge in {max_iter} iterations", active if not scalar else (), U[active]
    )


def default_guess(U, eos, rp):
    """Crude starting point: resting equilibrium at the cell's density, theta = 1."""
    U = np.asarray(U, dtype=float)
    rho = np.maximum(U[..., 0], np.finfo(float).tiny)
    Y = np.zeros(U.shape)
    Y[..., THETA] = -1.0
    Y[..., 0] = eos.psi_from_rho_theta(rho, np.ones_like(rho))
    return Y


# ---------------------------------------------------------------- fluxes


def rusanov(YL, YR, UL, UR, smax, eos, rp):
    FL = flux_dir(YL, E1, eos, rp)
    FR = flux_dir(YR, E1, eos, rp)
    return 0.5 * (FL + FR) - 0.5 * np.asarray(smax)[..., None] * (UR - UL)


def numerical_flux(UL, UR, eos, rp, guess_L=None, guess_R=None):
    """Rusanov two-point flux between conserved states ``UL`` and ``UR``."""
    UL = np.asarray(UL, dtype=float)
    UR = np.asarray(UR, dtype=float)
    YL = conserved_to_godunov(UL, default_guess(UL, eos, rp) if guess_L is None else guess_L, eos, rp)
    YR = conserved_to_godunov(UR, default_guess(UR, eos, rp) if guess_R is None else guess_R, eos, rp)
    smax = np.maximum(spectral_radius(YL, E1, eos, rp), spectral_radius(YR, E1, eos, rp))
    return rusanov(YL, YR, UL, UR, smax, eos, rp)


def minmod(a, b):
    return np.where(a * b > 0.0, np.sign(a) * np.minimum(np.abs(a), np.abs(b)), 0.0)


def limited_slope(Y, limiter):
    dl = Y - np.roll(Y, 1, axis=0)
    dr = np.roll(Y, -1, axis=0) - Y
    if limiter == "minmod":
        return minmod(dl, dr)
    if limiter == "mc":
        return minmod(0.5 * (dl + dr), 2.0 * minmod(dl, dr))
    if limiter == "none":
        return 0.5 * (dl + dr)
    raise ConfigError(f"unknown limiter {limiter!r}")


def transport_rhs(U, Y, dx, eos, rp, order=1, limiter="minmod", smax_cells=None):
    """-(F_{i+1/2} - F_{i-1/2}) / dx on a periodic grid."""
    if smax_cells is None:
        smax_cells = spectral_radius(Y, E1, eos, rp)
    s_face = np.maximum(smax_cells, np.roll(smax_cells, -1))
    if order == 1:
        F = flux_dir(Y, E1, eos, rp)
        Fface = 0.5 * (F + np.roll(F, -1, axis=0)) - 0.5 * s_face[:, None] * (np.roll(U, -1, axis=0) - U)
    elif order == 2:
        slope = limited_slope(Y, limiter)
        YL = Y + 0.5 * slope
        YR = np.roll(Y - 0.5 * slope, -1, axis=0)
        Fface = rusanov(YL, YR, grad_x0(YL, eos, rp), grad_x0(YR, eos, rp), s_face, eos, rp)
    else:
        raise ConfigError(f"order must be 1 or 2, got {order}")
    return -(Fface - np.roll(Fface, 1, axis=0)) / dx


# ---------------------------------------------------------------- relaxation


def relaxation_rates(theta, rho, rp):
    """Frozen-coefficient decay rates of (Sigma, sigma, q).

    With mass, momentum and energy held fixed, the dissipative conserved
    densities obey d' = -k d with k = theta/(2 eta tau1 rho),
    theta/(3 zeta tau2 rho) and theta^2/(chi tau0 rho) respectively.
    """
    t0, t1, t2 = rp.taus
    if min(t0, t1, t2) <= 0.0:
        raise ConfigError("relaxation needs epsilon > 0")
    return (
        theta / (2.0 * rp.eta * t1 * rho),
        theta / (3.0 * rp.zeta * t2 * rho),
        theta * theta / (rp.chi * t0 * rho),
    )


def relax_substep(U, dt, eos, rp, Y=None):
    """Exponential update of the dissipative conserved densities over ``dt``.

    Rows 0..4 (mass, momentum, energy) are untouched.  ``Y`` is the Godunov
    state matching ``U``; it supplies theta and is recovered by Newton when
    not given.
    """
    U = np.asarray(U, dtype=float)
    if Y is None:
        Y = conserved_to_godunov(U, default_guess(U, eos, rp), eos, rp)
    theta = -1.0 / np.asarray(Y)[..., THETA]
    k_dev, k_bulk, k_heat = relaxation_rates(theta, U[..., 0], rp)
    out = U.copy()
    out[..., DEV] *= np.exp(-dt * k_dev)[..., None]
    out[..., BULK] *= np.exp(-dt * k_bulk)
    out[..., HEAT] *= np.exp(-dt * k_heat)[..., None]
    return out


# ---------------------------------------------------------------- stepping


def max_speed(field_, eos, rp):
    return spectral_radius(field_.Y, E1, eos, rp)


def stable_dt(field_, cfl, eos, rp):
    return cfl * field_.grid.dx / float(np.max(max_speed(field_, eos, rp)))


def _invert(U, Y, eos, rp, t):
    try:
        return conserved_to_godunov(U, Y, eos, rp)
    except InversionError as exc:
        cells = exc.cells
        dump = {int(c): U[c].tolist() for c in cells[:5]}
        raise InversionError(f"t={t:.6g}: {exc}; offending U: {dump}", cells, exc.states) from None


def step(field_, dt, eos, rp, order=1, limiter="minmod", cfl_max=0.9):
    """One Strang-split step; returns a new :class:`Field1D`."""
    dx = field_.grid.dx
    smax = max_speed(field_, eos, rp)
    courant = dt * float(np.max(smax)) / dx
    if courant > cfl_max * (1.0 + 1e-9):
        raise ConfigError(f"CFL violated: dt*smax/dx = {courant:.4f} > {cfl_max}")
    U = relax_substep(field_.U, 0.5 * dt, eos, rp, field_.Y)
    Y = _invert(U, field_.Y, eos, rp, field_.t)
    if order == 1:
        U = U + dt * transport_rhs(U, Y, dx, eos, rp, 1, limiter, smax)
        Y = _invert(U, Y, eos, rp, field_.t)
    else:
        U1 = U + dt * transport_rhs(U, Y, dx, eos, rp, order, limiter, smax)
        Y1 = _invert(U1, Y, eos, rp, field_.t)
        U = 0.5 * U + 0.5 * (U1 + dt * transport_rhs(U1, Y1, dx, eos, rp, order, limiter, smax))
        Y = _invert(U, Y1, eos, rp, field_.t)
    U = relax_substep(U, 0.5 * dt, eos, rp, Y)
    Y = _invert(U, Y, eos, rp, field_.t)
    if not (np.all(np.isfinite(U)) and np.all(np.isfinite(Y))):
        raise NumericalError(f"non-finite state at t={field_.t + dt:.6g}")
    return Field1D(field_.grid, U, Y, field_.t + dt)


# ---------------------------------------------------------------- setup


def field_from_physical(grid, phys, eos, rp):
    Y = to_godunov(phys, eos, rp).vector
    return Field1D(grid, grad_x0(Y, eos, rp), Y, 0.0)


def well_prepared(grid, rho, u1, theta, rp):
    """Physical state with dissipative fields on the limit closure.

    Sigma = -2 eta devsym(grad u), sigma = -3 zeta div u, q = -chi grad theta,
    derivatives by periodic centred differences.
    """
    n = grid.n_cells
    ux = grid.ddx(u1)
    thx = grid.ddx(theta)
    Sigma = -2.0 * rp.eta * ux[:, None] * DEV_BASIS[:, 0, 0][None, :]
    u = np.zeros((n, 3))
    u[:, 0] = u1
    q = np.zeros((n, 3))
    q[:, 0] = -rp.chi * thx
    return PhysicalState(rho=rho, u=u, theta=theta, Sigma=Sigma, sigma=-3.0 * rp.zeta * ux, q=q)


def sigma11(phys):
    """(1,1) entry of the trace-free stress from its packed coordinates."""
    return phys.Sigma @ DEV_BASIS[:, 0, 0]


def snapshot_columns(field_, eos, rp):
    ph = field_.physical(eos, rp)
    return {
        "x": field_.grid.centers,
        "rho": ph.rho,
        "u1": ph.u[:, 0],
        "theta": ph.theta,
        "Sigma11": sigma11(ph),
        "sigma": ph.sigma,
        "q1": ph.q[:, 0],
    }


def total_entropy_production(field_, rp):
    """Cell sum of Y_diss . I(Y) dx."""
    return float(np.sum(entropy_production(field_.Y, rp)) * field_.grid.dx)


@dataclass
class Trajectory:
    times: list = field(default_factory=list)
    snapshots: list = field(default_factory=list)
    entropy_production: list = field(default_factory=list)
    steps: int = 0
    flags: list = field(default_factory=list)
    final: Field1D | None = None


def integrate(field_, t_end, eos, rp, cfl=0.5, order=1, limiter="minmod", every=None, record=None):
    """Advance to ``t_end`` with CFL-limited steps.

    Snapshots (via ``record(field) -> dict``, default :func:`snapshot_columns`)
    are taken at t = 0, every ``every`` time units, and at ``t_end``.
    """
    if not 0.0 < cfl <= 0.9:
        raise ConfigError(f"cfl must lie in (0, 0.9], got {cfl}")
    if record is None:
        record = lambda f: snapshot_columns(f, eos, rp)  # noqa: E731
    traj = Trajectory()
    traj.times.append(field_.t)
    traj.snapshots.append(record(field_))
    next_out = field_.t + every if every else np.inf
    while field_.t < t_end * (1.0 - 1e-14):
        dt = stable_dt(field_, cfl, eos, rp)
        target = min(t_end, next_out)
        clipped = field_.t + dt >= target
        if clipped:
            dt = target - field_.t
        field_ = step(field_, dt, eos, rp, order, limiter, cfl_max=max(cfl, 0.9))
        if clipped:
            field_.t = target
        traj.steps += 1
        traj.entropy_production.append(total_entropy_production(field_, rp))
        hit_out = bool(every) and abs(field_.t - next_out) <= 1e-12 * max(1.0, abs(next_out))
        if hit_out:
            next_out += every
        if hit_out or field_.t >= t_end * (1.0 - 1e-14):
            if not traj.times or field_.t > traj.times[-1]:
                traj.times.append(field_.t)
                traj.snapshots.append(record(field_))
    traj.final = field_
    return traj

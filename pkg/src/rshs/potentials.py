"""Density and flux potentials, their gradients and Hessians, and the source.

Gradients are written out analytically.  Hessians are obtained by pushing
dual numbers through those analytic gradients, so one code path serves every
state.  All functions are vectorised over leading axes of the (..., 14)
Godunov array; the gradient functions also accept :class:`~rshs.dual.Dual`.
"""

from __future__ import annotations

import numpy as np

from . import dual
from .dual import Dual
from .state import BULK, DEV, DEV_BASIS, HEAT, NVARS, THETA, as_vector, extended_psi


def _vec(Y):
    return Y if isinstance(Y, Dual) else as_vector(Y)


def _thermo(Y, eos, rp):
    theta = -1.0 / Y[..., THETA]
    psi = extended_psi(Y, rp)
    p = eos.pressure(theta, psi)
    p_psi, p_theta = eos.pressure_partials(theta, psi)[:2]
    return theta, p, p_psi, p_theta


def _dev_matvec(Y, j, a_vec):
    """Row ``j`` of (Sum_m s_m B_m) applied to ``a_vec`` (a list of 3 components)."""
    out = 0.0
    for m in range(5):
        row = DEV_BASIS[m, j]
        if not np.any(row):
            continue
        out = out + Y[..., 5 + m] * (row[0] * a_vec[0] + row[1] * a_vec[1] + row[2] * a_vec[2])
    return out


def x0(Y, eos, rp):
    """Density potential X0 = p/theta."""
    Y = _vec(Y)
    theta, p, _, _ = _thermo(Y, eos, rp)
    return p / theta


def xj(Y, eos, rp):
    """Flux potentials (X1, X2, X3) stacked along the last axis."""
    Y = _vec(Y)
    theta, p, _, _ = _thermo(Y, eos, rp)
    ut = [Y[..., 1], Y[..., 2], Y[..., 3]]
    out = []
    for j in range(3):
        out.append(
            p * ut[j]
            + theta * _dev_matvec(Y, j, ut)
            + theta * Y[..., BULK] * ut[j]
            + theta * Y[..., 11 + j]
        )
    return dual.stack(out)


def grad_x0(Y, eos, rp):
    """Conserved densities [rho, rho u, rho e + rho|u|^2/2, tau1 rho s, tau2 rho sigma_t, tau0 rho q_t]."""
    Y = _vec(Y)
    t0, t1, t2 = rp.taus
    theta, p, p_psi, p_theta = _thermo(Y, eos, rp)
    rho = p_psi / theta
    usq = Y[..., 1] * Y[..., 1] + Y[..., 2] * Y[..., 2] + Y[..., 3] * Y[..., 3]
    comps = [rho]
    comps += [p_psi * Y[..., 1 + a] for a in range(3)]
    comps.append(theta * p_theta + 0.5 * theta * p_psi * usq - p)
    comps += [t1 * rho * Y[..., 5 + m] for m in range(5)]
    comps.append(t2 * rho * Y[..., BULK])
    comps += [t0 * rho * Y[..., 11 + a] for a in range(3)]
    return dual.stack(comps)


def _flux_row(Y, j, rp, theta, p, p_psi, p_theta):
    t0, t1, t2 = rp.taus
    ut = [Y[..., 1], Y[..., 2], Y[..., 3]]
    usq = ut[0] * ut[0] + ut[1] * ut[1] + ut[2] * ut[2]
    sig_t = Y[..., BULK]
    r = [p_psi * ut[j]]
    for k in range(3):
        e = p_psi * theta * ut[k] * ut[j] + theta * _dev_matvec(Y, j, _unit(k))
        if j == k:
            e = e + p + theta * sig_t
        r.append(e)
    r.append(
        theta
        * theta
        * (
            (p_theta + 0.5 * p_psi * usq) * ut[j]
            + _dev_matvec(Y, j, ut)
            + sig_t * ut[j]
            + Y[..., 11 + j]
        )
    )
    for m in range(5):
        B = DEV_BASIS[m, j]
        r.append(p_psi * t1 * Y[..., 5 + m] * ut[j] + theta * (B[0] * ut[0] + B[1] * ut[1] + B[2] * ut[2]))
    r.append(p_psi * t2 * sig_t * ut[j] + theta * ut[j])
    for a in range(3):
        e = p_psi * t0 * Y[..., 11 + a] * ut[j]
        if a == j:
            e = e + theta
        r.append(e)
    return dual.stack(r)


def grad_xj(Y, eos, rp):
    """Fluxes: array (..., 3, 14) whose row j is the gradient of X^j."""
    Y = _vec(Y)
    th = _thermo(Y, eos, rp)
    return dual.stack([_flux_row(Y, j, rp, *th) for j in range(3)], axis=-2)


def _unit(k):
    return [1.0 if i == k else 0.0 for i in range(3)]


def flux_dir(Y, n, eos, rp):
    """Flux in direction ``n``: sum_j n_j grad X^j."""
    Y = _vec(Y)
    n = np.asarray(n, dtype=float)
    th = _thermo(Y, eos, rp)
    out = 0.0
    for j in range(3):
        if n[j] != 0.0:
            out = out + n[j] * _flux_row(Y, j, rp, *th)
    return out


def hess_x0(Y, eos, rp):
    """Symmetriser D^2 X0, shape (..., 14, 14).

    With f(theta, psi) = p/theta and theta, psi functions of Y,

        D^2 X0 = f_pp dpsi dpsi^T + f_tp (dth dpsi^T + dpsi dth^T) + f_tt dth dth^T
                 + f_t D^2 theta + f_p D^2 psi

    where dth = theta^2 e_theta and D^2 psi is sparse.  Matches
    :func:`hess_x0_ad` to round-off.
    """
    Y = as_vector(Y)
    t0, t1, t2 = rp.taus
    theta = -1.0 / Y[..., THETA]
    psi = extended_psi(Y, rp)
    p = eos.pressure(theta, psi)
    p_p, p_t, p_pp, p_tp, p_tt = eos.pressure_partials(theta, psi)
    th2 = theta * theta
    f_p = p_p / theta
    f_t = p_t / theta - p / th2
    f_pp = p_pp / theta
    f_tp = p_tp / theta - p_p / th2
    f_tt = p_tt / theta - 2.0 * p_t / th2 + 2.0 * p / (th2 * theta)

    ut = Y[..., 1:4]
    usq = np.sum(ut * ut, axis=-1)
    dpsi = np.zeros(Y.shape)
    dpsi[..., 0] = 1.0
    dpsi[..., 1:4] = theta[..., None] * ut
    dpsi[..., THETA] = 0.5 * th2 * usq
    dpsi[..., DEV] = t1 * Y[..., DEV]
    dpsi[..., BULK] = t2 * Y[..., BULK]
    dpsi[..., HEAT] = t0 * Y[..., HEAT]

    H = f_pp[..., None, None] * dpsi[..., :, None] * dpsi[..., None, :]
    cross = (f_tp * th2)[..., None] * dpsi
    H[..., THETA, :] += cross
    H[..., :, THETA] += cross
    H[..., THETA, THETA] += f_tt * th2 * th2 + f_t * 2.0 * th2 * theta

    # f_p * D^2 psi
    i3 = np.arange(1, 4)
    H[..., i3, i3] += (f_p * theta)[..., None]
    side = (f_p * th2)[..., None] * ut
    H[..., 1:4, THETA] += side
    H[..., THETA, 1:4] += side
    H[..., THETA, THETA] += f_p * th2 * theta * usq
    for sl, tau in ((DEV, t1), (HEAT, t0)):
        idx = np.arange(sl.start, sl.stop)
        H[..., idx, idx] += (f_p * tau)[..., None]
    H[..., BULK, BULK] += f_p * t2
    return H


def hess_x0_ad(Y, eos, rp):
    """D^2 X0 by forward-mode differentiation of :func:`grad_x0`."""
    return dual.jacobian(lambda Z: grad_x0(Z, eos, rp), as_vector(Y))


def hess_x_dir(Y, n, eos, rp):
    """D^2 (n . X), shape (..., 14, 14)."""
    n = np.asarray(n, dtype=float)
    if abs(np.linalg.norm(n) - 1.0) > 1e-12:
        raise ValueError("direction must be a unit vector")
    return dual.jacobian(lambda Z: flux_dir(Z, n, eos, rp), as_vector(Y))


def source(Y, rp):
    """Relaxation source: zero on the first five rows, -Sigma/(2 eta), -sigma/(3 zeta), -q/chi."""
    Y = _vec(Y)
    theta = -1.0 / Y[..., THETA]
    zero = 0.0 * theta
    comps = [zero] * 5
    comps += [-theta * Y[..., 5 + m] / (2.0 * rp.eta) for m in range(5)]
    comps.append(-theta * Y[..., BULK] / (3.0 * rp.zeta))
    comps += [-theta * theta * Y[..., 11 + a] / rp.chi for a in range(3)]
    return dual.stack(comps)


def source_jacobian(Y, rp):
    """Exact Jacobian of :func:`source` in Godunov variables, shape (..., 14, 14)."""
    Y = as_vector(Y)
    theta = -1.0 / Y[..., THETA]
    th2 = theta * theta
    J = np.zeros(Y.shape + (NVARS,))
    dev_rate = -theta / (2.0 * rp.eta)
    bulk_rate = -theta / (3.0 * rp.zeta)
    heat_rate = -th2 / rp.chi
    for m in range(5):
        J[..., 5 + m, 5 + m] = dev_rate
        J[..., 5 + m, THETA] = -th2 * Y[..., 5 + m] / (2.0 * rp.eta)
    J[..., BULK, BULK] = bulk_rate
    J[..., BULK, THETA] = -th2 * Y[..., BULK] / (3.0 * rp.zeta)
    for a in range(3):
        J[..., 11 + a, 11 + a] = heat_rate
        J[..., 11 + a, THETA] = -2.0 * th2 * theta * Y[..., 11 + a] / rp.chi
    return J


def entropy_production(Y, rp):
    """Y_diss . I(Y); non-positive by construction."""
    Y = as_vector(Y)
    return np.sum(Y[..., DEV.start : HEAT.stop] * source(Y, rp)[..., DEV.start : HEAT.stop], axis=-1)

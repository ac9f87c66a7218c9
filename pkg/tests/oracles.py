"""Independent reference computations used by the tests.

Nothing here calls into the solver paths being checked: the closed forms are
written out from the ideal-gas relations directly.
"""

import numpy as np
from scipy.integrate import solve_ivp

from rshs.state import DEV_BASIS


def random_states(rng, n, diss=0.3, umax=1.0):
    """Random physical fields (rho, u, theta, Sigma, sigma, q) as plain arrays."""
    rho = rng.uniform(0.2, 5.0, n)
    theta = rng.uniform(0.2, 5.0, n)
    u = rng.uniform(-umax, umax, (n, 3))
    Sigma = rng.uniform(-diss, diss, (n, 5))
    sigma = rng.uniform(-diss, diss, n)
    q = rng.uniform(-diss, diss, (n, 3))
    return rho, u, theta, Sigma, sigma, q


def godunov_closed_form(rho, u, theta, Sigma, sigma, q, gamma, R, p_ref, taus):
    """Main field from physical fields, written out by hand."""
    t0, t1, t2 = taus
    k = gamma / (gamma - 1.0)
    ut = u / theta[..., None]
    s = Sigma / theta[..., None]
    st = sigma / theta
    qt = q / (theta * theta)[..., None]
    psi_ext = R * np.log(rho * R * theta / (p_ref * theta**k))
    psi_t = (
        psi_ext
        - 0.5 * theta * np.sum(ut * ut, axis=-1)
        - 0.5 * t1 * np.sum(s * s, axis=-1)
        - 0.5 * t2 * st * st
        - 0.5 * t0 * np.sum(qt * qt, axis=-1)
    )
    return np.concatenate(
        [psi_t[..., None], ut, (-1.0 / theta)[..., None], s, st[..., None], qt], axis=-1
    )


def conserved_closed_form(rho, u, theta, Sigma, sigma, q, gamma, R, taus):
    t0, t1, t2 = taus
    cv = R / (gamma - 1.0)
    E = rho * cv * theta + 0.5 * rho * np.sum(u * u, axis=-1)
    return np.concatenate(
        [
            rho[..., None],
            rho[..., None] * u,
            E[..., None],
            t1 * (rho / theta)[..., None] * Sigma,
            (t2 * rho * sigma / theta)[..., None],
            t0 * (rho / theta**2)[..., None] * q,
        ],
        axis=-1,
    )


def invert_closed_form(U, gamma, R, p_ref, taus):
    """Conserved densities back to the main field for the ideal gas.

    Mass, momentum and energy fix rho, u and theta; the dissipative rows are
    then linear in the main field.
    """
    t0, t1, t2 = taus
    cv = R / (gamma - 1.0)
    rho = U[..., 0]
    u = U[..., 1:4] / rho[..., None]
    theta = (U[..., 4] / rho - 0.5 * np.sum(u * u, axis=-1)) / cv
    s = U[..., 5:10] / (t1 * rho)[..., None]
    st = U[..., 10] / (t2 * rho)
    qt = U[..., 11:14] / (t0 * rho)[..., None]
    Sigma = s * theta[..., None]
    sigma = st * theta
    q = qt * (theta * theta)[..., None]
    return godunov_closed_form(rho, u, theta, Sigma, sigma, q, gamma, R, p_ref, taus)


def sigma11_from_packed(Sigma):
    return Sigma @ DEV_BASIS[:, 0, 0]


def relax_ode(U0, dt, gamma, R, p_ref, taus, eta, zeta, chi):
    """Stiff ODE dU/dt = I(Y(U)) for one cell, integrated with Radau at tight tolerance.

    The source is written out in the main field: -theta s/(2 eta),
    -theta sigma_t/(3 zeta), -theta^2 q_t/chi on the dissipative rows.
    """

    def rhs(_, U):
        Y = invert_closed_form(U, gamma, R, p_ref, taus)
        theta = -1.0 / Y[4]
        out = np.zeros(14)
        out[5:10] = -theta * Y[5:10] / (2.0 * eta)
        out[10] = -theta * Y[10] / (3.0 * zeta)
        out[11:14] = -theta * theta * Y[11:14] / chi
        return out

    sol = solve_ivp(rhs, (0.0, dt), np.asarray(U0, dtype=float), method="Radau", rtol=1e-11, atol=1e-14)
    return sol.y[:, -1]


def nsf_symbol(k, rho0, theta0, gamma, R, mu, chi):
    """Eigenvalues of the linearised 1D NSF system for perturbations ~ exp(i k x + lam t).

    Unknowns (rho', u', theta'):
        rho_t   = -rho0 u_x
        u_t     = -(R theta0/rho0) rho_x - R theta_x + (mu/rho0) u_xx
        theta_t = -(R theta0/cv) u_x + (chi/(rho0 cv)) theta_xx
    """
    cv = R / (gamma - 1.0)
    ik = 1j * k
    M = np.array(
        [
            [0.0, -ik * rho0, 0.0],
            [-ik * R * theta0 / rho0, -mu * k * k / rho0, -ik * R],
            [0.0, -ik * R * theta0 / cv, -chi * k * k / (rho0 * cv)],
        ],
        dtype=complex,
    )
    lam, V = np.linalg.eig(M)
    return lam, V

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import conserved_closed_form, random_states
from rshs.eos import IdealGas
from rshs.potentials import (
    entropy_production,
    flux_dir,
    grad_x0,
    grad_xj,
    hess_x0,
    hess_x_dir,
    source,
    source_jacobian,
    x0,
    xj,
)
from rshs.state import DEV_BASIS, PhysicalState, RelaxationParams, equilibrium, to_godunov
from rshs.structure import symmetry_residual

RP = RelaxationParams(0.7, 1.3, 0.9, 1.1, 0.8, 1.5)
EOS = IdealGas()


def _states(rng, n, diss=0.3):
    fields = random_states(rng, n, diss=diss)
    return fields, to_godunov(PhysicalState(*fields), EOS, RP).vector


def _fd_grad(fn, Y, h=1e-6):
    G = np.empty(Y.shape)
    for i in range(Y.shape[-1]):
        e = np.zeros(Y.shape[-1])
        e[i] = h
        G[..., i] = (fn(Y + e) - fn(Y - e)) / (2 * h)
    return G


def _rel(a, b):
    return np.max(np.abs(a - b)) / np.max(np.abs(b))


def test_gradient_vs_fd_1000_states(rng):
    _, Y = _states(rng, 1000)
    for i in range(0, 1000, 100):
        blk = Y[i : i + 100]
        assert _rel(grad_x0(blk, EOS, RP), _fd_grad(lambda Z: x0(Z, EOS, RP), blk)) < 1e-6
        for j in range(3):
            fd = _fd_grad(lambda Z: xj(Z, EOS, RP)[..., j], blk)
            assert _rel(grad_xj(blk, EOS, RP)[..., j, :], fd) < 1e-6


def test_conserved_densities_closed_form(rng):
    fields, Y = _states(rng, 300)
    ref = conserved_closed_form(*fields, EOS.gamma, EOS.R, RP.taus)
    assert np.allclose(grad_x0(Y, EOS, RP), ref, rtol=1e-11, atol=1e-12)


def test_physical_fluxes(rng):
    (rho, u, theta, Sig, sig, q), Y = _states(rng, 200)
    F = grad_xj(Y, EOS, RP)
    t0, t1, t2 = RP.taus
    p = rho * EOS.R * theta
    S = np.einsum("nm,mij->nij", Sig, DEV_BASIS)
    E = rho * EOS.cv * theta + 0.5 * rho * np.sum(u * u, axis=1)
    for j in range(3):
        Fj = F[:, j, :]
        assert np.allclose(Fj[:, 0], rho * u[:, j])
        mom = rho[:, None] * u * u[:, j : j + 1] + S[:, :, j]
        mom[:, j] += p + sig
        assert np.allclose(Fj[:, 1:4], mom)
        energy = (E + p + sig) * u[:, j] + np.einsum("ni,ni->n", S[:, j, :], u) + q[:, j]
        assert np.allclose(Fj[:, 4], energy)
        dev = t1 * (rho / theta * u[:, j])[:, None] * Sig + np.einsum("mi,ni->nm", DEV_BASIS[:, j, :], u)
        assert np.allclose(Fj[:, 5:10], dev)
        assert np.allclose(Fj[:, 10], t2 * rho * sig / theta * u[:, j] + u[:, j])
        heat = t0 * (rho / theta**2 * u[:, j])[:, None] * q
        heat[:, j] += theta
        assert np.allclose(Fj[:, 11:14], heat)


def test_hessians_vs_second_differences(rng):
    _, Y = _states(rng, 20)
    n = np.array([0.6, 0.0, 0.8])
    for fn, H in (
        (lambda Z: x0(Z, EOS, RP), hess_x0(Y, EOS, RP)),
        (lambda Z: xj(Z, EOS, RP) @ n, hess_x_dir(Y, n, EOS, RP)),
    ):
        h = 1e-4
        fd = np.empty_like(H)
        for a in range(14):
            for b in range(14):
                ea, eb = np.zeros(14), np.zeros(14)
                ea[a], eb[b] = h, h
                fd[:, a, b] = (
                    fn(Y + ea + eb) - fn(Y + ea - eb) - fn(Y - ea + eb) + fn(Y - ea - eb)
                ) / (4 * h * h)
        assert _rel(H, fd) < 1e-5


def test_hessians_symmetric(rng):
    _, Y = _states(rng, 50)
    assert symmetry_residual(hess_x0(Y, EOS, RP)) <= 1e-12
    for n in np.eye(3):
        assert symmetry_residual(hess_x_dir(Y, n, EOS, RP)) <= 1e-12


def test_flux_dir_is_linear_in_direction(rng):
    _, Y = _states(rng, 10)
    n = np.array([1.0, -2.0, 0.5])
    F = grad_xj(Y, EOS, RP)
    assert np.allclose(flux_dir(Y, n, EOS, RP), np.einsum("j,njk->nk", n, F))


def test_hess_dir_requires_unit_vector():
    with pytest.raises(ValueError):
        hess_x_dir(equilibrium(EOS, RP), [1.0, 1.0, 0.0], EOS, RP)


def test_equilibrium_block_structure():
    rho, theta = 1.7, 2.3
    Y = equilibrium(EOS, RP, rho, theta)
    H = hess_x0(Y, EOS, RP)
    p = rho * EOS.R * theta
    k = EOS.exponent
    R = EOS.R
    p_pp, p_tp, p_tt = p / R**2, k * p / (R * theta), k * (k - 1) * p / theta**2
    t0, t1, t2 = RP.taus
    expect = np.zeros((14, 14))
    expect[0, 0] = p_pp / theta
    expect[0, 4] = expect[4, 0] = theta * p_tp - p / R
    expect[4, 4] = theta**3 * p_tt
    expect[1:4, 1:4] = np.eye(3) * p / R
    expect[5:10, 5:10] = np.eye(5) * rho * t1
    expect[10, 10] = rho * t2
    expect[11:14, 11:14] = np.eye(3) * rho * t0
    assert np.allclose(H, expect, rtol=1e-12, atol=1e-12)


def test_symmetriser_is_inverse_of_inversion_jacobian(rng):
    from oracles import invert_closed_form

    _, Y = _states(rng, 5)
    U = grad_x0(Y, EOS, RP)
    H = hess_x0(Y, EOS, RP)
    h = 1e-6
    for c in range(5):
        J = np.empty((14, 14))
        for i in range(14):
            e = np.zeros(14)
            e[i] = h * max(1.0, abs(U[c, i]))
            J[:, i] = (
                invert_closed_form(U[c] + e, EOS.gamma, EOS.R, EOS.p_ref, RP.taus)
                - invert_closed_form(U[c] - e, EOS.gamma, EOS.R, EOS.p_ref, RP.taus)
            ) / (2 * e[i])
        assert np.allclose(J @ H[c], np.eye(14), atol=1e-6)


@given(st.integers(0, 2**32 - 1))
def test_entropy_production_nonpositive(seed):
    _, Y = _states(np.random.default_rng(seed), 50, diss=2.0)
    assert np.all(entropy_production(Y, RP) <= 0.0)


def test_source_vanishes_at_equilibrium():
    Y = equilibrium(EOS, RP, 1.3, 0.4, (0.2, -0.1, 0.0))
    assert np.all(source(Y, RP) == 0.0)


def test_source_in_physical_terms(rng):
    (rho, u, theta, Sig, sig, q), Y = _states(rng, 50)
    I = source(Y, RP)
    assert np.all(I[:, :5] == 0.0)
    assert np.allclose(I[:, 5:10], -Sig / (2 * RP.eta))
    assert np.allclose(I[:, 10], -sig / (3 * RP.zeta))
    assert np.allclose(I[:, 11:14], -q / RP.chi)


def test_source_jacobian_vs_fd(rng):
    _, Y = _states(rng, 30)
    J = source_jacobian(Y, RP)
    fd = np.stack([_fd_grad(lambda Z: source(Z, RP)[..., r], Y) for r in range(14)], axis=-2)
    assert _rel(J, fd) < 1e-7


@given(st.integers(0, 2**32 - 1), st.sampled_from([1.2, 1.4, 5.0 / 3.0]))
def test_closed_form_symmetriser_matches_dual(seed, gamma):
    from rshs.potentials import hess_x0_ad

    eos = IdealGas(gamma=gamma, R=0.6, p_ref=1.7)
    Y = to_godunov(PhysicalState(*random_states(np.random.default_rng(seed), 20)), eos, RP).vector
    A, B = hess_x0(Y, eos, RP), hess_x0_ad(Y, eos, RP)
    assert np.max(np.abs(A - B)) <= 1e-12 * np.max(np.abs(B))

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from oracles import godunov_closed_form, random_states
from rshs.eos import IdealGas
from rshs.errors import DomainError, ValidationError
from rshs.state import (
    DEV_BASIS,
    GodunovState,
    PhysicalState,
    RelaxationParams,
    devsym,
    equilibrium,
    from_godunov,
    pack_dev,
    to_godunov,
    unpack_dev,
)

coords = arrays(float, 5, elements=st.floats(-10, 10))


def test_basis_orthonormal_symmetric_tracefree():
    G = np.einsum("mij,nij->mn", DEV_BASIS, DEV_BASIS)
    assert np.allclose(G, np.eye(5), atol=1e-15)
    assert np.allclose(DEV_BASIS, np.swapaxes(DEV_BASIS, 1, 2))
    assert np.allclose(np.trace(DEV_BASIS, axis1=1, axis2=2), 0.0)


@given(coords)
def test_pack_unpack_roundtrip(s):
    assert np.allclose(pack_dev(unpack_dev(s)), s, atol=1e-12)


@given(arrays(float, (3, 3), elements=st.floats(-10, 10)))
def test_pack_preserves_frobenius_norm(A):
    T = devsym(A)
    assert np.isclose(np.linalg.norm(pack_dev(T)), np.linalg.norm(T), atol=1e-10)


def test_pack_rejects_bad_tensors():
    with pytest.raises(ValidationError):
        pack_dev(np.diag([1.0, 0.0, 0.0]))
    with pytest.raises(ValidationError):
        pack_dev(np.array([[0.0, 1.0, 0.0], [0.0, 0.0, 0.0], [0.0, 0.0, 0.0]]))
    with pytest.raises(ValidationError):
        pack_dev(np.zeros((2, 2)))


def test_godunov_matches_closed_form(rng, eos):
    rp = RelaxationParams(0.5, 2.0, 3.0, 1.0, 1.0, 1.0, epsilon=0.7)
    fields = random_states(rng, 200)
    Y = to_godunov(PhysicalState(*fields), eos, rp).vector
    ref = godunov_closed_form(*fields, eos.gamma, eos.R, eos.p_ref, rp.taus)
    assert np.allclose(Y, ref, rtol=1e-12, atol=1e-12)


def test_roundtrip_random(rng):
    eos = IdealGas(gamma=5.0 / 3.0, R=0.5, p_ref=2.0)
    rp = RelaxationParams(1.0, 0.3, 2.0, 1.0, 1.0, 1.0)
    fields = random_states(rng, 500)
    back = from_godunov(to_godunov(PhysicalState(*fields), eos, rp).vector, eos, rp)
    for a, b in zip(fields, (back.rho, back.u, back.theta, back.Sigma, back.sigma, back.q)):
        assert np.allclose(a, b, rtol=1e-12, atol=1e-13)


def test_equilibrium_has_no_dissipative_part(eos, rp):
    Y = equilibrium(eos, rp, 2.0, 3.0, (0.1, 0.0, 0.0))
    assert np.all(Y[5:] == 0.0)
    assert np.isclose(Y[4], -1.0 / 3.0)
    assert np.isclose(Y[1], 0.1 / 3.0)


def test_godunov_state_blocks(eos, rp):
    Y = equilibrium(eos, rp)
    g = GodunovState.from_vector(Y)
    assert np.array_equal(g.vector, Y)
    assert np.array_equal(np.asarray(g), Y)
    with pytest.raises(ValidationError):
        GodunovState.from_vector(np.zeros(13))


def test_physical_validation():
    with pytest.raises(DomainError):
        to_godunov(PhysicalState(rho=1.0, u=[0, 0, 0], theta=-1.0), IdealGas(), RelaxationParams())
    with pytest.raises(ValidationError):
        PhysicalState(rho=1.0, u=[0, 0], theta=1.0)
    with pytest.raises(ValidationError):
        PhysicalState.from_dict({"rho": 1.0})


def test_physical_dict_roundtrip():
    p = PhysicalState(rho=1.5, u=[0.1, 0.2, 0.3], theta=2.0, Sigma=[0.1, 0, 0, 0, 0.2], sigma=0.05, q=[0, 0, 1])
    p2 = PhysicalState.from_dict(p.to_dict())
    assert np.allclose(p2.Sigma, p.Sigma) and np.allclose(p2.q, p.q) and p2.rho == p.rho


def test_relaxation_params():
    rp = RelaxationParams(1.0, 2.0, 3.0, epsilon=0.1)
    assert np.allclose(rp.taus, (0.1, 0.2, 0.3))
    assert rp.with_epsilon(1.0).taus == (1.0, 2.0, 3.0)
    assert rp.scaled_coefficients(1e3).chi == 1e3
    with pytest.raises(ValidationError):
        RelaxationParams(eta=0.0)
    with pytest.raises(ValidationError):
        RelaxationParams(epsilon=-1.0)

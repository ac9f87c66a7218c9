"""State representations and conversions.

Godunov (main-field) vector layout, 14 components::

    [psi_t, u_t(3), theta_t, s(5), sigma_t, q_t(3)]

with ``theta_t = -1/theta``, ``u_t = u/theta``, ``s`` the orthonormal
coordinates of Sigma/theta, ``sigma_t = sigma/theta`` and ``q_t = q/theta**2``.
All array functions are vectorised over leading axes.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, ValidationError

NVARS = 14
PSI = 0
VEL = slice(1, 4)
THETA = 4
DEV = slice(5, 10)
BULK = 10
HEAT = slice(11, 14)
DISS = slice(5, 14)
EQUIL = slice(0, 5)

_r2, _r6 = np.sqrt(2.0), np.sqrt(6.0)

#: Frobenius-orthonormal basis of symmetric trace-free 3x3 matrices.
DEV_BASIS = np.array(
    [
        np.diag([2.0, -1.0, -1.0]) / _r6,
        np.diag([0.0, 1.0, -1.0]) / _r2,
        [[0.0, 1.0, 0.0], [1.0, 0.0, 0.0], [0.0, 0.0, 0.0]],
        [[0.0, 0.0, 1.0], [0.0, 0.0, 0.0], [1.0, 0.0, 0.0]],
        [[0.0, 0.0, 0.0], [0.0, 0.0, 1.0], [0.0, 1.0, 0.0]],
    ]
)
DEV_BASIS[2:] /= _r2
DEV_BASIS.setflags(write=False)


def pack_dev(T, tol=1e-12):
    """Orthonormal coordinates (..., 5) of symmetric trace-free ``T`` (..., 3, 3)."""
    T = np.asarray(T, dtype=float)
    if T.shape[-2:] != (3, 3):
        raise ValidationError(f"expected (..., 3, 3), got {T.shape}")
    scale = np.maximum(np.linalg.norm(T, axis=(-2, -1)), 1.0)
    if np.any(np.abs(T - np.swapaxes(T, -1, -2)).max(axis=(-2, -1)) > tol * scale):
        raise ValidationError("tensor is not symmetric")
    if np.any(np.abs(np.trace(T, axis1=-2, axis2=-1)) > tol * scale):
        raise ValidationError("tensor is not trace-free")
    return np.einsum("...ij,mij->...m", T, DEV_BASIS)


def unpack_dev(s):
    s = np.asarray(s, dtype=float)
    if s.shape[-1] != 5:
        raise ValidationError(f"expected (..., 5), got {s.shape}")
    return np.einsum("...m,mij->...ij", s, DEV_BASIS)


def devsym(A):
    """Symmetric trace-free part of a (..., 3, 3) matrix."""
    A = np.asarray(A, dtype=float)
    S = 0.5 * (A + np.swapaxes(A, -1, -2))
    tr = np.trace(S, axis1=-2, axis2=-1)
    return S - tr[..., None, None] * np.eye(3) / 3.0


@dataclass(frozen=True)
class RelaxationParams:
    """Relaxation moduli, transport coefficients and the scaling ``epsilon``.

    ``tau0, tau1, tau2`` are the unscaled moduli; the model uses
    ``epsilon * (tau0, tau1, tau2)``, see :attr:`taus`.
    """

    tau0: float = 1.0
    tau1: float = 1.0
    tau2: float = 1.0
    eta: float = 1.0
    zeta: float = 1.0
    chi: float = 1.0
    epsilon: float = 1.0

    def __post_init__(self):
        for name in ("tau0", "tau1", "tau2", "eta", "zeta", "chi"):
            v = getattr(self, name)
            if not (np.isfinite(v) and v > 0.0):
                raise ValidationError(f"{name} must be positive and finite, got {v}")
        if not (np.isfinite(self.epsilon) and self.epsilon >= 0.0):
            raise ValidationError(f"epsilon must be non-negative, got {self.epsilon}")

    @property
    def taus(self):
        """Scaled moduli (tau0, tau1, tau2)."""
        e = self.epsilon
        return e * self.tau0, e * self.tau1, e * self.tau2

    def with_epsilon(self, epsilon):
        return RelaxationParams(
            self.tau0, self.tau1, self.tau2, self.eta, self.zeta, self.chi, float(epsilon)
        )

    def scaled_coefficients(self, factor):
        """Same moduli with (eta, zeta, chi) multiplied by ``factor``."""
        return RelaxationParams(
            self.tau0,
            self.tau1,
            self.tau2,
            self.eta * factor,
            self.zeta * factor,
            self.chi * factor,
            self.epsilon,
        )


@dataclass(frozen=True)
class PhysicalState:
    """Laboratory variables.  Fields may be scalars or batched arrays."""

    rho: np.ndarray
    u: np.ndarray = field(default_factory=lambda: np.zeros(3))
    theta: np.ndarray = 1.0
    Sigma: np.ndarray = field(default_factory=lambda: np.zeros(5))
    sigma: np.ndarray = 0.0
    q: np.ndarray = field(default_factory=lambda: np.zeros(3))

    def __post_init__(self):
        for name in ("rho", "theta", "sigma"):
            object.__setattr__(self, name, np.asarray(getattr(self, name), dtype=float))
        for name, n in (("u", 3), ("Sigma", 5), ("q", 3)):
            v = np.asarray(getattr(self, name), dtype=float)
            if v.shape[-1:] != (n,):
                raise ValidationError(f"{name} must have trailing dimension {n}, got {v.shape}")
            object.__setattr__(self, name, v)

    def validate(self):
        if not np.all(self.rho > 0.0):
            raise DomainError("rho must be positive")
        if not np.all(self.theta > 0.0):
            raise DomainError("theta must be positive")

    @property
    def Sigma_tensor(self):
        return unpack_dev(self.Sigma)

    def to_dict(self):
        return {
            "rho": self.rho.tolist(),
            "u": self.u.tolist(),
            "theta": self.theta.tolist(),
            "Sigma": self.Sigma.tolist(),
            "sigma": self.sigma.tolist(),
            "q": self.q.tolist(),
        }

    @classmethod
    def from_dict(cls, d):
        try:
            return cls(
                rho=d["rho"],
                u=d.get("u", [0.0, 0.0, 0.0]),
                theta=d["theta"],
                Sigma=d.get("Sigma", [0.0] * 5),
                sigma=d.get("sigma", 0.0),
                q=d.get("q", [0.0, 0.0, 0.0]),
            )
        except KeyError as exc:
            raise ValidationError(f"physical state is missing field {exc}") from None


@dataclass(frozen=True)
class GodunovState:
    """The 14-component main-field vector, split into named blocks."""

    psi_t: np.ndarray
    u_t: np.ndarray
    theta_t: np.ndarray
    sigma_dev_t: np.ndarray
    sigma_bulk_t: np.ndarray
    q_t: np.ndarray

    @property
    def vector(self):
        lead = np.shape(self.psi_t)
        parts = [
            np.broadcast_to(self.psi_t, lead)[..., None],
            np.broadcast_to(self.u_t, lead + (3,)),
            np.broadcast_to(self.theta_t, lead)[..., None],
            np.broadcast_to(self.sigma_dev_t, lead + (5,)),
            np.broadcast_to(self.sigma_bulk_t, lead)[..., None],
            np.broadcast_to(self.q_t, lead + (3,)),
        ]
        return np.concatenate(parts, axis=-1).astype(float)

    def __array__(self, dtype=None, copy=None):
        v = self.vector
        return v if dtype is None else v.astype(dtype)

    @classmethod
    def from_vector(cls, Y):
        Y = np.asarray(Y, dtype=float)
        if Y.shape[-1] != NVARS:
            raise ValidationError(f"expected trailing dimension {NVARS}, got {Y.shape}")
        return cls(Y[..., PSI], Y[..., VEL], Y[..., THETA], Y[..., DEV], Y[..., BULK], Y[..., HEAT])


def as_vector(Y):
    """Accept a :class:`GodunovState` or a raw (..., 14) array."""
    if isinstance(Y, GodunovState):
        return Y.vector
    Y = np.asarray(Y, dtype=float)
    if Y.shape[-1] != NVARS:
        raise ValidationError(f"expected trailing dimension {NVARS}, got {Y.shape}")
    return Y


def extended_psi(Y, rp):
    """Extended potential psi = psi_t + theta|u_t|^2/2 + quadratic dissipative terms.

    ``Y`` may be an array or a dual; the temperature enters through theta_t.
    """
    t0, t1, t2 = rp.taus
    theta = -1.0 / Y[..., THETA]
    usq = Y[..., 1] * Y[..., 1] + Y[..., 2] * Y[..., 2] + Y[..., 3] * Y[..., 3]
    ssq = Y[..., 5] * Y[..., 5]
    for m in range(6, 10):
        ssq = ssq + Y[..., m] * Y[..., m]
    qsq = Y[..., 11] * Y[..., 11] + Y[..., 12] * Y[..., 12] + Y[..., 13] * Y[..., 13]
    return (
        Y[..., PSI]
        + 0.5 * theta * usq
        + 0.5 * t1 * ssq
        + 0.5 * t2 * Y[..., BULK] * Y[..., BULK]
        + 0.5 * t0 * qsq
    )


def to_godunov(p, eos, rp):
    """Godunov state of a :class:`PhysicalState`."""
    p.validate()
    theta = p.theta
    psi = eos.psi_from_rho_theta(p.rho, theta)
    u_t = p.u / theta[..., None]
    s = p.Sigma / theta[..., None]
    sig_t = p.sigma / theta
    q_t = p.q / (theta * theta)[..., None]
    t0, t1, t2 = rp.taus
    psi_t = (
        psi
        - 0.5 * theta * np.sum(u_t * u_t, axis=-1)
        - 0.5 * t1 * np.sum(s * s, axis=-1)
        - 0.5 * t2 * sig_t * sig_t
        - 0.5 * t0 * np.sum(q_t * q_t, axis=-1)
    )
    return GodunovState(psi_t, u_t, -1.0 / theta, s, sig_t, q_t)


def from_godunov(Y, eos, rp):
    """Physical state of a Godunov state (or (..., 14) array)."""
    Y = as_vector(Y)
    theta_t = Y[..., THETA]
    if not np.all(theta_t < 0.0):
        raise DomainError("theta_t must be negative (theta > 0)")
    theta = -1.0 / theta_t
    psi = extended_psi(Y, rp)
    rho, _ = eos.density_energy(theta, psi)
    return PhysicalState(
        rho=rho,
        u=theta[..., None] * Y[..., VEL],
        theta=theta,
        Sigma=theta[..., None] * Y[..., DEV],
        sigma=theta * Y[..., BULK],
        q=(theta * theta)[..., None] * Y[..., HEAT],
    )


def equilibrium(eos, rp, rho=1.0, theta=1.0, u=(0.0, 0.0, 0.0)):
    """Godunov vector of the homogeneous state with vanishing dissipative fields."""
    return to_godunov(PhysicalState(rho=rho, u=u, theta=theta), eos, rp).vector

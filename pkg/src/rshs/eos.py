"""Equation of state p = p(theta, psi) in temperature / extended-potential form.

The model only needs the pressure as a function of temperature ``theta`` and
of the extended potential ``psi``, together with its first and second
partials.  Density and internal energy follow from

    p_psi = rho * theta,        theta * p_theta = rho * e + p.

All functions accept floats, numpy arrays or :class:`rshs.dual.Dual` values.
"""

from __future__ import annotations

import abc
from dataclasses import dataclass

import numpy as np

from . import dual
from .errors import DomainError, ValidationError


def _check_positive(name, x):
    v = dual.value(x)
    if not np.all(v > 0.0):
        raise DomainError(f"{name} must be positive, got min {np.min(v)!r}")


class Eos(abc.ABC):
    """Pressure p(theta, psi) and its partials up to second order."""

    @abc.abstractmethod
    def pressure(self, theta, psi): ...

    @abc.abstractmethod
    def pressure_partials(self, theta, psi):
        """Return ``(p_psi, p_theta, p_psipsi, p_thetapsi, p_thetatheta)``."""

    @abc.abstractmethod
    def psi_from_rho_theta(self, rho, theta): ...

    def density_energy(self, theta, psi):
        """Density and specific internal energy at ``(theta, psi)``."""
        p = self.pressure(theta, psi)
        p_psi, p_theta = self.pressure_partials(theta, psi)[:2]
        rho = p_psi / theta
        e = (theta * p_theta - p) / rho
        return rho, e


@dataclass(frozen=True)
class IdealGas(Eos):
    """Polytropic ideal gas, p = p_ref * theta**(gamma/(gamma-1)) * exp(psi/R).

    This is the closed form that satisfies both thermodynamic identities with
    p = rho R theta and e = c_v theta.  The additive entropy constant is fixed
    so that psi equals g/theta at equilibrium.
    """

    gamma: float = 1.4
    R: float = 1.0
    p_ref: float = 1.0

    def __post_init__(self):
        if not self.gamma > 1.0:
            raise ValidationError(f"gamma must exceed 1, got {self.gamma}")
        if not self.R > 0.0:
            raise ValidationError(f"R must be positive, got {self.R}")
        if not self.p_ref > 0.0:
            raise ValidationError(f"p_ref must be positive, got {self.p_ref}")

    @property
    def exponent(self):
        """gamma / (gamma - 1) = c_p / R."""
        return self.gamma / (self.gamma - 1.0)

    @property
    def cv(self):
        return self.R / (self.gamma - 1.0)

    @property
    def cp(self):
        return self.cv + self.R

    def pressure(self, theta, psi):
        _check_positive("theta", theta)
        return self.p_ref * dual.exp(self.exponent * dual.log(theta) + psi / self.R)

    def pressure_partials(self, theta, psi):
        p = self.pressure(theta, psi)
        k, R = self.exponent, self.R
        return (
            p / R,
            k * p / theta,
            p / (R * R),
            k * p / (R * theta),
            k * (k - 1.0) * p / (theta * theta),
        )

    def psi_from_rho_theta(self, rho, theta):
        _check_positive("rho", rho)
        _check_positive("theta", theta)
        rho = np.asarray(rho, dtype=float)
        theta = np.asarray(theta, dtype=float)
        return self.R * (
            np.log(rho * self.R * theta / self.p_ref) - self.exponent * np.log(theta)
        )

    def sound_speed(self, theta):
        return np.sqrt(self.gamma * self.R * np.asarray(theta, dtype=float))

    @classmethod
    def from_dict(cls, d):
        unknown = set(d) - {"gamma", "R", "p_ref"}
        if unknown:
            raise ValidationError(f"unknown eos keys: {sorted(unknown)}")
        return cls(**{k: float(v) for k, v in d.items()})

    def to_dict(self):
        return {"gamma": self.gamma, "R": self.R, "p_ref": self.p_ref}


def pressure(eos, theta, psi):
    return eos.pressure(theta, psi)


def pressure_partials(eos, theta, psi):
    return eos.pressure_partials(theta, psi)


def density_energy(eos, theta, psi):
    return eos.density_energy(theta, psi)


def psi_from_rho_theta(eos, rho, theta):
    return eos.psi_from_rho_theta(rho, theta)

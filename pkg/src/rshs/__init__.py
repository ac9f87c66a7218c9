"""Symmetric-hyperbolic relaxation model of a viscous heat-conducting gas.

Godunov-variable potentials and their derivatives, structural checks
(symmetriser positivity, dissipativity, Kawashima condition), a 1D
finite-volume relaxation solver and a Navier-Stokes-Fourier reference.
"""

from .eos import IdealGas
from .errors import (
    ConfigError,
    DomainError,
    InversionError,
    NumericalError,
    PreconditionError,
    RshsError,
    StructuralError,
    ValidationError,
)
from .state import GodunovState, PhysicalState, RelaxationParams, equilibrium, from_godunov, to_godunov

__all__ = [
    "ConfigError",
    "DomainError",
    "GodunovState",
    "IdealGas",
    "InversionError",
    "NumericalError",
    "PhysicalState",
    "PreconditionError",
    "RelaxationParams",
    "RshsError",
    "StructuralError",
    "ValidationError",
    "equilibrium",
    "from_godunov",
    "to_godunov",
]

"""Initial conditions shared by the relaxation and the Navier-Stokes-Fourier solvers.

Each builder returns laboratory fields ``(rho, u1, theta)`` on the cell centres.
"""

from __future__ import annotations

import json

import numpy as np

from .errors import ConfigError


def density_sine(grid, amplitude, rho0=1.0, theta0=1.0, mode=1):
    """rho = rho0 (1 + A sin(2 pi m x / L)), fluid at rest, uniform temperature."""
    k = 2.0 * np.pi * mode / grid.length
    x = grid.centers - grid.x_min
    rho = rho0 * (1.0 + amplitude * np.sin(k * x))
    return rho, np.zeros_like(rho), np.full_like(rho, theta0)


def acoustic_pulse(grid, amplitude, eos, rho0=1.0, theta0=1.0, width=0.05):
    """Right-running isentropic Gaussian pulse centred in the domain.

    The Gaussian is smooth enough to be periodic to round-off when ``width``
    is small compared with the domain length.
    """
    x = grid.centers
    xc = 0.5 * (grid.x_min + grid.x_max)
    drho = amplitude * rho0 * np.exp(-(((x - xc) / (width * grid.length)) ** 2))
    c = float(eos.sound_speed(theta0))
    rho = rho0 + drho
    u1 = c * drho / rho0
    theta = theta0 * (rho / rho0) ** (eos.gamma - 1.0)
    return rho, u1, theta


def custom_json(grid, path):
    """Fields read from a JSON file {"rho": [...], "u1": [...], "theta": [...]}."""
    with open(path) as fh:
        d = json.load(fh)
    try:
        rho = np.asarray(d["rho"], dtype=float)
        theta = np.asarray(d["theta"], dtype=float)
        u1 = np.asarray(d.get("u1", np.zeros_like(rho)), dtype=float)
    except KeyError as exc:
        raise ConfigError(f"custom initial data missing {exc}") from None
    for name, arr in (("rho", rho), ("u1", u1), ("theta", theta)):
        if arr.shape != (grid.n_cells,):
            raise ConfigError(f"custom {name} has shape {arr.shape}, expected ({grid.n_cells},)")
    return rho, u1, theta


def build(ic, grid, eos):
    """Dispatch on an :class:`rshs.config.ICConfig`."""
    if ic.type == "density_sine":
        return density_sine(grid, ic.amplitude, ic.rho0, ic.theta0, ic.mode)
    if ic.type == "acoustic_pulse":
        return acoustic_pulse(grid, ic.amplitude, eos, ic.rho0, ic.theta0, ic.width)
    if ic.type == "custom_json":
        if not ic.path:
            raise ConfigError("custom_json initial condition needs a 'path'")
        return custom_json(grid, ic.path)
    raise ConfigError(f"unknown initial condition type {ic.type!r}")

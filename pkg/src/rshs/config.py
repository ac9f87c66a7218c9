"""Run configuration: dataclasses mirroring the JSON config file.

Example::

    {"eos": {"gamma": 1.4, "R": 1.0, "p_ref": 1.0},
     "relax": {"tau": [1, 1, 1], "epsilon": 1.0, "eta": 1, "zeta": 1, "chi": 1},
     "grid": {"n": 200, "xmin": 0.0, "xmax": 1.0},
     "time": {"t_end": 0.1, "cfl": 0.8},
     "ic": {"type": "density_sine", "amplitude": 0.05},
     "output": {"every": 0.05, "path": "snapshots"}}

Optional sections: "scheme", "state" and "source" (verify), "sweep", "decay".
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, fields

from .eos import IdealGas
from .errors import ConfigError, RshsError
from .state import RelaxationParams


def _build(cls, d, name):
    if d is None:
        return cls()
    if not isinstance(d, dict):
        raise ConfigError(f"section {name!r} must be an object")
    known = {f.name for f in fields(cls)}
    unknown = set(d) - known
    if unknown:
        raise ConfigError(f"unknown keys in {name!r}: {sorted(unknown)}")
    try:
        return cls(**d)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"invalid {name!r}: {exc}") from None


@dataclass
class RelaxConfig:
    tau: tuple = (1.0, 1.0, 1.0)
    epsilon: float = 1.0
    eta: float = 1.0
    zeta: float = 1.0
    chi: float = 1.0

    def __post_init__(self):
        if len(self.tau) != 3:
            raise ConfigError("relax.tau must have three entries [tau0, tau1, tau2]")
        self.tau = tuple(float(t) for t in self.tau)

    def params(self, epsilon=None):
        t0, t1, t2 = self.tau
        eps = self.epsilon if epsilon is None else epsilon
        try:
            return RelaxationParams(t0, t1, t2, float(self.eta), float(self.zeta), float(self.chi), float(eps))
        except RshsError as exc:
            raise ConfigError(str(exc)) from None


@dataclass
class GridConfig:
    n: int = 200
    xmin: float = 0.0
    xmax: float = 1.0

    def build(self):
        from .solver import Grid1D

        return Grid1D(int(self.n), float(self.xmin), float(self.xmax))


@dataclass
class TimeConfig:
    t_end: float = 0.1
    cfl: float = 0.8

    def __post_init__(self):
        if not self.t_end > 0:
            raise ConfigError("time.t_end must be positive")
        if not 0.0 < self.cfl <= 0.9:
            raise ConfigError("time.cfl must lie in (0, 0.9]")


@dataclass
class ICConfig:
    type: str = "density_sine"
    amplitude: float = 0.05
    rho0: float = 1.0
    theta0: float = 1.0
    mode: int = 1
    width: float = 0.05
    path: str | None = None


@dataclass
class OutputConfig:
    every: float | None = None
    path: str = "snapshots"


@dataclass
class SchemeConfig:
    order: int = 2
    limiter: str = "none"
    nsf_limiter: str = "none"

    def __post_init__(self):
        if self.order not in (1, 2):
            raise ConfigError("scheme.order must be 1 or 2")
        for lim in (self.limiter, self.nsf_limiter):
            if lim not in ("none", "minmod", "mc"):
                raise ConfigError(f"unknown limiter {lim!r}")


@dataclass
class StateConfig:
    rho: float = 1.0
    theta: float = 1.0
    u: tuple = (0.0, 0.0, 0.0)


@dataclass
class SweepConfig:
    epsilons: tuple = (0.02, 0.01, 0.005, 0.0025)

    def __post_init__(self):
        self.epsilons = tuple(float(e) for e in self.epsilons)
        if not self.epsilons or any(e <= 0 for e in self.epsilons):
            raise ConfigError("sweep.epsilons must be non-empty and positive")
        if any(b >= a for a, b in zip(self.epsilons, self.epsilons[1:])):
            raise ConfigError("sweep.epsilons must be strictly decreasing")


@dataclass
class DecayConfig:
    tail_fraction: float = 0.5

    def __post_init__(self):
        if not 0.0 < self.tail_fraction < 1.0:
            raise ConfigError("decay.tail_fraction must lie in (0, 1)")


@dataclass
class SimConfig:
    eos: IdealGas = field(default_factory=IdealGas)
    relax: RelaxConfig = field(default_factory=RelaxConfig)
    grid: GridConfig = field(default_factory=GridConfig)
    time: TimeConfig = field(default_factory=TimeConfig)
    ic: ICConfig = field(default_factory=ICConfig)
    output: OutputConfig = field(default_factory=OutputConfig)
    scheme: SchemeConfig = field(default_factory=SchemeConfig)
    state: StateConfig = field(default_factory=StateConfig)
    source: str = "on"
    sweep: SweepConfig = field(default_factory=SweepConfig)
    decay: DecayConfig = field(default_factory=DecayConfig)
    seed: int = 0

    @property
    def params(self):
        return self.relax.params()

    @classmethod
    def from_dict(cls, d):
        if not isinstance(d, dict):
            raise ConfigError("config must be a JSON object")
        allowed = {f.name for f in fields(cls)}
        unknown = set(d) - allowed
        if unknown:
            raise ConfigError(f"unknown config sections: {sorted(unknown)}")
        try:
            eos = IdealGas.from_dict(d.get("eos", {}))
        except RshsError as exc:
            raise ConfigError(f"invalid 'eos': {exc}") from None
        source = d.get("source", "on")
        if source not in ("on", "off"):
            raise ConfigError("source must be 'on' or 'off'")
        cfg = cls(
            eos=eos,
            relax=_build(RelaxConfig, d.get("relax"), "relax"),
            grid=_build(GridConfig, d.get("grid"), "grid"),
            time=_build(TimeConfig, d.get("time"), "time"),
            ic=_build(ICConfig, d.get("ic"), "ic"),
            output=_build(OutputConfig, d.get("output"), "output"),
            scheme=_build(SchemeConfig, d.get("scheme"), "scheme"),
            state=_build(StateConfig, d.get("state"), "state"),
            source=source,
            sweep=_build(SweepConfig, d.get("sweep"), "sweep"),
            decay=_build(DecayConfig, d.get("decay"), "decay"),
            seed=int(d.get("seed", 0)),
        )
        cfg.params  # validates the relaxation parameters
        return cfg

    @classmethod
    def load(cls, path):
        try:
            with open(path) as fh:
                d = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from None
        return cls.from_dict(d)

"""The two long-run experiments: relaxation sweep toward the NSF reference and decay to equilibrium.

Deviation norms are discrete L2 norms over cells, with every variable group
z-scored by a reference-state magnitude so the mixed-unit total is meaningful:

    rho / rho0,  u / c0,  theta / theta0,  (Sigma, sigma) / p0,  q / (p0 c0)

where c0 is the sound speed and p0 = rho0 R theta0.
"""

from __future__ import annotations

import csv
import math
import os
import time
from dataclasses import asdict, dataclass, field

import numpy as np

from . import initial, nsf
from . import solver as S
from .errors import RshsError
from .svg import line_chart

GROUPS = ("rho", "u", "theta", "diss")
BLOWUP_FACTOR = 10.0


@dataclass(frozen=True)
class Scales:
    rho: float
    u: float
    theta: float
    stress: float
    heat: float

    @classmethod
    def reference(cls, eos, rho0, theta0):
        c0 = float(eos.sound_speed(theta0))
        p0 = rho0 * eos.R * theta0
        return cls(rho0, c0, theta0, p0, p0 * c0)

    def describe(self):
        return {
            "norm": "discrete L2 over cells, groups z-scored by reference magnitudes",
            "rho_scale": self.rho,
            "u_scale": self.u,
            "theta_scale": self.theta,
            "stress_scale": self.stress,
            "heat_scale": self.heat,
        }


def _l2(sq, dx):
    return float(math.sqrt(dx * float(np.sum(sq))))


def deviation_norms(phys, rho0, u0, theta0, scales, dx):
    """Group norms of the deviation from the uniform state (rho0, u0, theta0), zero dissipation."""
    d_rho = ((phys.rho - rho0) / scales.rho) ** 2
    d_u = np.sum(((phys.u - np.asarray(u0)) / scales.u) ** 2, axis=-1)
    d_th = ((phys.theta - theta0) / scales.theta) ** 2
    d_diss = (
        np.sum((phys.Sigma / scales.stress) ** 2, axis=-1)
        + (phys.sigma / scales.stress) ** 2
        + np.sum((phys.q / scales.heat) ** 2, axis=-1)
    )
    out = {
        "rho": _l2(d_rho, dx),
        "u": _l2(d_u, dx),
        "theta": _l2(d_th, dx),
        "diss": _l2(d_diss, dx),
    }
    out["total"] = _l2(d_rho + d_u + d_th + d_diss, dx)
    return out


def distance(a, b, scales, dx):
    """Group L2 distances between two sets of (rho, u1, theta) columns."""
    d_rho = ((a["rho"] - b["rho"]) / scales.rho) ** 2
    d_u = ((a["u1"] - b["u1"]) / scales.u) ** 2
    d_th = ((a["theta"] - b["theta"]) / scales.theta) ** 2
    return {
        "rho": _l2(d_rho, dx),
        "u": _l2(d_u, dx),
        "theta": _l2(d_th, dx),
        "total": _l2(d_rho + d_u + d_th, dx),
    }


def fitted_orders(eps, dist):
    """log(d_prev / d) / log(eps_prev / eps) over consecutive pairs."""
    out = []
    for (e0, d0), (e1, d1) in zip(zip(eps, dist), zip(eps[1:], dist[1:])):
        if d0 > 0 and d1 > 0:
            out.append(math.log(d0 / d1) / math.log(e0 / e1))
        else:
            out.append(float("nan"))
    return out


def exp_fit(t, y):
    """Least-squares fit log y = a - rate t; returns (rate, r2)."""
    t = np.asarray(t, dtype=float)
    y = np.asarray(y, dtype=float)
    ok = np.isfinite(y) & (y > 0)
    t, ly = t[ok], np.log(y[ok])
    if t.size < 3:
        return float("nan"), float("nan")
    slope, icpt = np.polyfit(t, ly, 1)
    resid = ly - (icpt + slope * t)
    ss_tot = float(np.sum((ly - ly.mean()) ** 2))
    r2 = 1.0 - float(np.sum(resid**2)) / ss_tot if ss_tot > 0 else 1.0
    return float(-slope), r2


# ---------------------------------------------------------------- sweep


@dataclass
class SweepResult:
    epsilons: list
    distances: list  # per epsilon: dict group -> distance
    orders: list
    t_end: float
    n_cells: int
    steps: list = field(default_factory=list)
    seconds: list = field(default_factory=list)
    metadata: dict = field(default_factory=dict)

    @property
    def totals(self):
        return [d["total"] for d in self.distances]

    @property
    def strictly_decreasing(self):
        tot = self.totals
        return all(b < a for a, b in zip(tot, tot[1:]))

    def rows(self):
        out = []
        for i, (e, d) in enumerate(zip(self.epsilons, self.distances)):
            row = {"epsilon": e, **{f"dist_{k}": v for k, v in d.items()}}
            row["order"] = self.orders[i - 1] if i > 0 else float("nan")
            out.append(row)
        return out

    def to_dict(self):
        d = asdict(self)
        d["strictly_decreasing"] = self.strictly_decreasing
        return d


def _setup(cfg, rp):
    eos = cfg.eos
    grid = cfg.grid.build()
    rho, u1, theta = initial.build(cfg.ic, grid, eos)
    phys = S.well_prepared(grid, rho, u1, theta, rp)
    return grid, S.field_from_physical(grid, phys, eos, rp), (rho, u1, theta)


def nsf_reference(cfg):
    """Final (rho, u1, theta) columns of the NSF run on the configured grid and IC."""
    eos = cfg.eos
    grid = cfg.grid.build()
    rho, u1, theta = initial.build(cfg.ic, grid, eos)
    coeffs = nsf.NsfCoefficients(cfg.relax.eta, cfg.relax.zeta, cfg.relax.chi)
    st = nsf.NsfState1D(grid, nsf.conservative(rho, u1, theta, eos))
    tr = nsf.integrate(st, cfg.time.t_end, eos, coeffs, cfl=cfg.time.cfl, limiter=cfg.scheme.nsf_limiter)
    return tr.snapshots[-1], tr.steps


def rshs_final(cfg, rp):
    eos = cfg.eos
    _, f, _ = _setup(cfg, rp)
    tr = S.integrate(
        f, cfg.time.t_end, eos, rp, cfl=cfg.time.cfl, order=cfg.scheme.order, limiter=cfg.scheme.limiter
    )
    return tr.snapshots[-1], tr.steps, tr.final


def relax_sweep(cfg, log=None):
    eos = cfg.eos
    scales = Scales.reference(eos, cfg.ic.rho0, cfg.ic.theta0)
    t0 = time.perf_counter()
    ref, ref_steps = nsf_reference(cfg)
    ref_seconds = time.perf_counter() - t0
    if log:
        log(f"nsf reference: {ref_steps} steps, {ref_seconds:.1f} s")
    dx = cfg.grid.build().dx
    dists, steps, secs = [], [], []
    for eps in cfg.sweep.epsilons:
        rp = cfg.relax.params(epsilon=eps)
        t0 = time.perf_counter()
        try:
            snap, n, _ = rshs_final(cfg, rp)
        except RshsError as exc:
            raise type(exc)(f"epsilon={eps:g}: {exc}") from None
        secs.append(time.perf_counter() - t0)
        steps.append(n)
        dists.append(distance(snap, ref, scales, dx))
        if log:
            log(f"eps={eps:g}: distance {dists[-1]['total']:.4e}, {n} steps, {secs[-1]:.1f} s")
    eps = list(cfg.sweep.epsilons)
    res = SweepResult(
        epsilons=eps,
        distances=dists,
        orders=fitted_orders(eps, [d["total"] for d in dists]),
        t_end=cfg.time.t_end,
        n_cells=cfg.grid.n,
        steps=steps,
        seconds=secs,
    )
    res.metadata = {
        **scales.describe(),
        "variables": ["rho", "u1", "theta"],
        "mu_eff": 4.0 / 3.0 * cfg.relax.eta + 3.0 * cfg.relax.zeta,
        "nsf_steps": ref_steps,
        "nsf_seconds": ref_seconds,
        "scheme_order": cfg.scheme.order,
        "limiter": cfg.scheme.limiter,
    }
    return res


def write_sweep(res, out_dir):
    os.makedirs(out_dir, exist_ok=True)
    rows = res.rows()
    with open(os.path.join(out_dir, "sweep.csv"), "w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=list(rows[0]))
        w.writeheader()
        for r in rows:
            w.writerow({k: f"{v:.10e}" for k, v in r.items()})
    series = [("total", res.epsilons, res.totals)]
    for g in ("rho", "u", "theta"):
        series.append((g, res.epsilons, [d[g] for d in res.distances]))
    svg = line_chart(
        series,
        title="L2 distance to NSF at t_end",
        xlabel="epsilon",
        ylabel="distance",
        logx=True,
        logy=True,
    )
    with open(os.path.join(out_dir, "sweep.svg"), "w") as fh:
        fh.write(svg)


# ---------------------------------------------------------------- decay


@dataclass
class DecayResult:
    times: list
    norms: dict  # group -> list over times
    rate: float
    r2: float
    diss_rate: float
    flags: list = field(default_factory=list)
    steps: int = 0
    metadata: dict = field(default_factory=dict)

    @property
    def ratio(self):
        tot = self.norms["total"]
        return tot[-1] / tot[0] if tot[0] > 0 else 0.0

    def rows(self):
        keys = list(self.norms)
        return [{"t": t, **{k: self.norms[k][i] for k in keys}} for i, t in enumerate(self.times)]

    def to_dict(self):
        d = asdict(self)
        d["ratio"] = self.ratio
        return d


def decay(cfg, log=None):
    """Perturbed-equilibrium run at fixed relaxation times (epsilon = 1)."""
    eos = cfg.eos
    rp = cfg.relax.params(epsilon=1.0)
    rho0, theta0 = cfg.ic.rho0, cfg.ic.theta0
    scales = Scales.reference(eos, rho0, theta0)
    grid, f, _ = _setup(cfg, rp)
    every = cfg.output.every or cfg.time.t_end / 40.0

    def record(fl):
        return deviation_norms(fl.physical(eos, rp), rho0, (0.0, 0.0, 0.0), theta0, scales, grid.dx)

    t0 = time.perf_counter()
    tr = S.integrate(
        f,
        cfg.time.t_end,
        eos,
        rp,
        cfl=cfg.time.cfl,
        order=cfg.scheme.order,
        limiter=cfg.scheme.limiter,
        every=every,
        record=record,
    )
    secs = time.perf_counter() - t0
    norms = {k: [s[k] for s in tr.snapshots] for k in (*GROUPS, "total")}
    flags = list(tr.flags)
    tot = np.asarray(norms["total"])
    if not np.all(np.isfinite(tot)):
        flags.append("non_finite_norm")
    elif tot[0] > 0 and np.max(tot) > BLOWUP_FACTOR * tot[0]:
        flags.append("norm_growth")
    times = np.asarray(tr.times)
    tail = times >= times[-1] - cfg.decay.tail_fraction * (times[-1] - times[0])
    rate, r2 = exp_fit(times[tail], tot[tail])
    diss_rate, _ = exp_fit(times[tail], np.asarray(norms["diss"])[tail])
    if log:
        log(f"decay: {tr.steps} steps, {secs:.1f} s, ratio {tot[-1] / tot[0] if tot[0] else 0:.3e}")
    return DecayResult(
        times=[float(t) for t in tr.times],
        norms=norms,
        rate=rate,
        r2=r2,
        diss_rate=diss_rate,
        flags=flags,
        steps=tr.steps,
        metadata={**scales.describe(), "tail_fraction": cfg.decay.tail_fraction, "seconds": secs},
    )


def write_decay(res, out_dir):
    os.makedirs(out_dir, exist_ok=True)
    rows = res.rows()
    with open(os.path.join(out_dir, "decay.csv"), "w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=list(rows[0]))
        w.writeheader()
        for r in rows:
            w.writerow({k: f"{v:.10e}" for k, v in r.items()})
    series = [(k, res.times, v) for k, v in res.norms.items()]
    svg = line_chart(
        series,
        title=f"deviation from equilibrium (tail rate {res.rate:.3g}, R2 {res.r2:.3f})",
        xlabel="t",
        ylabel="L2 deviation",
        logy=True,
    )
    with open(os.path.join(out_dir, "decay.svg"), "w") as fh:
        fh.write(svg)


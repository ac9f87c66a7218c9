"""Command-line driver.

    python3 -m rshs verify      --config configs/verify.json --out runs/verify
    python3 -m rshs simulate    --config configs/simulate.json --out runs/sim [--model nsf]
    python3 -m rshs relax-sweep --config configs/sweep.json --out runs/sweep
    python3 -m rshs decay       --config configs/decay.json --out runs/decay

Exit codes: 0 all checks pass, 1 a check failed, 2 invalid input, 3 numerical abort.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import math
import os
import sys

import numpy as np

from . import experiments, initial, nsf
from . import solver as S
from .config import SimConfig
from .errors import ConfigError, NumericalError, PreconditionError, RshsError, StructuralError
from .state import equilibrium
from .structure import default_directions, verify_structure

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_NUMERIC = 0, 1, 2, 3

log = logging.getLogger("rshs")


def _clean(obj):
    """JSON-safe copy: numpy scalars to floats, non-finite floats to strings."""
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _clean(obj.tolist())
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer, int)):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        x = float(obj)
        return x if math.isfinite(x) else str(x)
    return obj


def write_report(out_dir, report):
    os.makedirs(out_dir, exist_ok=True)
    with open(os.path.join(out_dir, "report.json"), "w") as fh:
        json.dump(_clean(report), fh, indent=2, sort_keys=True)


def write_snapshot(path, columns):
    keys = ["x", "rho", "u1", "theta", "Sigma11", "sigma", "q1"]
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(keys)
        for row in zip(*(columns[k] for k in keys)):
            w.writerow([f"{v:.12e}" for v in row])


def cmd_verify(cfg, args):
    eos = cfg.eos
    rp = cfg.params
    st = cfg.state
    Y = equilibrium(eos, rp, st.rho, st.theta, st.u)
    dirs = default_directions(np.random.default_rng(args.seed), n_random=5)
    rep = verify_structure(Y, eos, rp, dirs, with_source=cfg.source == "on")
    rep.metadata["mu_eff"] = 4.0 / 3.0 * rp.eta + 3.0 * rp.zeta
    rep.metadata["seed"] = args.seed
    print(rep.table())
    write_report(args.out, {"command": "verify", **rep.to_dict()})
    return EXIT_OK if rep.all_passed else EXIT_FAIL


def cmd_simulate(cfg, args):
    eos = cfg.eos
    grid = cfg.grid.build()
    rho, u1, theta = initial.build(cfg.ic, grid, eos)
    snap_dir = os.path.join(args.out, cfg.output.path)
    if args.model == "nsf":
        coeffs = nsf.NsfCoefficients(cfg.relax.eta, cfg.relax.zeta, cfg.relax.chi)
        state = nsf.NsfState1D(grid, nsf.conservative(rho, u1, theta, eos))
        tr = nsf.integrate(
            state,
            cfg.time.t_end,
            eos,
            coeffs,
            cfl=cfg.time.cfl,
            limiter=cfg.scheme.nsf_limiter,
            every=cfg.output.every,
        )
        totals0, totals1 = state.totals(), tr.final.totals()
        extra = {"entropy_final": nsf.total_entropy(tr.final, eos)}
    else:
        rp = cfg.params
        f = S.field_from_physical(grid, S.well_prepared(grid, rho, u1, theta, rp), eos, rp)
        tr = S.integrate(
            f,
            cfg.time.t_end,
            eos,
            rp,
            cfl=cfg.time.cfl,
            order=cfg.scheme.order,
            limiter=cfg.scheme.limiter,
            every=cfg.output.every,
        )
        totals0, totals1 = f.totals()[:5], tr.final.totals()[:5]
        prod = np.asarray(tr.entropy_production)
        extra = {"max_entropy_production": float(prod.max()) if prod.size else 0.0}
    os.makedirs(snap_dir, exist_ok=True)
    files = []
    for i, (t, cols) in enumerate(zip(tr.times, tr.snapshots)):
        name = f"snap_{i:04d}_t{t:.6f}.csv"
        write_snapshot(os.path.join(snap_dir, name), cols)
        files.append(name)
    write_report(
        args.out,
        {
            "command": "simulate",
            "model": args.model,
            "steps": tr.steps,
            "times": tr.times,
            "snapshots": files,
            "totals_initial": totals0,
            "totals_final": totals1,
            "mu_eff": 4.0 / 3.0 * cfg.relax.eta + 3.0 * cfg.relax.zeta,
            **extra,
        },
    )
    print(f"{args.model}: {tr.steps} steps to t={tr.times[-1]:.6g}, {len(files)} snapshots in {snap_dir}")
    return EXIT_OK


def cmd_relax_sweep(cfg, args):
    res = experiments.relax_sweep(cfg, log=log.info)
    experiments.write_sweep(res, args.out)
    tot = res.totals
    third = len(tot) < 2 or tot[-1] <= tot[0] / 3.0
    passed = res.strictly_decreasing and third
    for r in res.rows():
        print(f"eps={r['epsilon']:<10g} distance={r['dist_total']:.4e}  order={r['order']:.3f}")
    write_report(
        args.out,
        {"command": "relax-sweep", **res.to_dict(), "smallest_vs_largest_ok": third, "passed": passed},
    )
    return EXIT_OK if passed else EXIT_FAIL


def cmd_decay(cfg, args):
    res = experiments.decay(cfg, log=log.info)
    experiments.write_decay(res, args.out)
    tot = res.norms["total"]
    if tot[0] == 0.0:
        passed = max(tot) <= 1e-12
    else:
        passed = res.ratio <= 0.1 and res.r2 >= 0.9 and not res.flags
    print(f"ratio={res.ratio:.4e} tail_rate={res.rate:.4g} r2={res.r2:.4f} flags={res.flags}")
    write_report(args.out, {"command": "decay", **res.to_dict(), "passed": passed})
    return EXIT_OK if passed else EXIT_FAIL


COMMANDS = {
    "verify": cmd_verify,
    "simulate": cmd_simulate,
    "relax-sweep": cmd_relax_sweep,
    "decay": cmd_decay,
}


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON config file (defaults used when omitted)")
    common.add_argument("--out", default="out", help="output directory")
    common.add_argument("--seed", type=int, default=None, help="RNG seed (overrides config)")
    common.add_argument("-v", "--verbose", action="store_true")
    p = argparse.ArgumentParser(prog="rshs", parents=[common])
    sub = p.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sp = sub.add_parser(name, parents=[common])
        if name == "simulate":
            sp.add_argument("--model", choices=("rshs", "nsf"), default="rshs")
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        cfg = SimConfig.load(args.config) if args.config else SimConfig()
        if args.seed is None:
            args.seed = cfg.seed
        if args.seed < 0:
            raise ConfigError("seed must be non-negative")
        return COMMANDS[args.command](cfg, args)
    except StructuralError as exc:
        print(f"check failed: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except NumericalError as exc:
        print(f"numerical abort: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (RshsError, PreconditionError) as exc:
        print(f"invalid input: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except OSError as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_INPUT

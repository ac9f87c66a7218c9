"""Run the relaxation model and the NSF reference on the same config and print the final distance.

    python3 scripts/compare_models.py configs/simulate.json
"""

import sys

from rshs import experiments as E
from rshs.config import SimConfig


def main(path):
    cfg = SimConfig.load(path)
    ref, n_ref = E.nsf_reference(cfg)
    snap, n, _ = E.rshs_final(cfg, cfg.params)
    d = E.distance(snap, ref, E.Scales.reference(cfg.eos, cfg.ic.rho0, cfg.ic.theta0), cfg.grid.build().dx)
    print(f"epsilon={cfg.relax.epsilon:g}  steps rshs={n} nsf={n_ref}")
    for k, v in d.items():
        print(f"  {k:<6} {v:.4e}")


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "configs/simulate.json")

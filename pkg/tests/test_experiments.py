import csv
import math

import numpy as np

from rshs import experiments as E
from rshs.config import SimConfig
from rshs.eos import IdealGas
from rshs.solver import Grid1D, well_prepared
from rshs.initial import density_sine
from rshs.state import RelaxationParams


def test_fitted_orders():
    eps = [0.1, 0.05, 0.025]
    assert np.allclose(E.fitted_orders(eps, [4.0, 2.0, 1.0]), [1.0, 1.0])
    assert np.allclose(E.fitted_orders(eps, [4.0, 1.0, 0.25]), [2.0, 2.0])
    assert math.isnan(E.fitted_orders(eps, [1.0, 0.0, 0.0])[0])


def test_exp_fit_recovers_rate():
    t = np.linspace(0, 5, 30)
    rate, r2 = E.exp_fit(t, 3.0 * np.exp(-0.7 * t))
    assert np.isclose(rate, 0.7) and np.isclose(r2, 1.0)
    _, r2_noisy = E.exp_fit(t, np.exp(-0.7 * t) * (1 + 0.5 * np.sin(7 * t)))
    assert r2_noisy < 0.99


def test_deviation_norm_zero_at_reference_and_scaled():
    eos = IdealGas()
    g = Grid1D(50)
    sc = E.Scales.reference(eos, 1.0, 1.0)
    rp = RelaxationParams()
    ph = well_prepared(g, *density_sine(g, 0.0), rp)
    n = E.deviation_norms(ph, 1.0, (0, 0, 0), 1.0, sc, g.dx)
    assert all(v == 0.0 for v in n.values())
    ph = well_prepared(g, *density_sine(g, 0.1), rp)
    n = E.deviation_norms(ph, 1.0, (0, 0, 0), 1.0, sc, g.dx)
    assert np.isclose(n["rho"], 0.1 / np.sqrt(2), rtol=1e-3)
    assert np.isclose(n["total"] ** 2, sum(n[k] ** 2 for k in E.GROUPS))
    # doubling the reference density halves the z-scored density deviation
    sc2 = E.Scales.reference(eos, 2.0, 1.0)
    assert np.isclose(E.deviation_norms(ph, 1.0, (0, 0, 0), 1.0, sc2, g.dx)["rho"], n["rho"] / 2)


def _small_cfg(**over):
    d = {
        "relax": {"eta": 0.1, "zeta": 0.1, "chi": 0.1},
        "grid": {"n": 40},
        "time": {"t_end": 0.02, "cfl": 0.8},
        "ic": {"type": "density_sine", "amplitude": 0.05},
        "sweep": {"epsilons": [0.04, 0.02]},
    }
    d.update(over)
    return SimConfig.from_dict(d)


def test_nsf_distance_to_itself_is_zero():
    cfg = _small_cfg()
    ref, _ = E.nsf_reference(cfg)
    ref2, _ = E.nsf_reference(cfg)
    d = E.distance(ref, ref2, E.Scales.reference(cfg.eos, 1.0, 1.0), cfg.grid.build().dx)
    assert d["total"] == 0.0


def test_small_sweep_writes_outputs(tmp_path):
    res = E.relax_sweep(_small_cfg())
    assert res.epsilons == [0.04, 0.02]
    assert all(d["total"] >= 0 for d in res.distances)
    assert len(res.orders) == 1
    E.write_sweep(res, tmp_path)
    rows = list(csv.DictReader(open(tmp_path / "sweep.csv")))
    assert [float(r["epsilon"]) for r in rows] == [0.04, 0.02]
    svg = (tmp_path / "sweep.svg").read_text()
    assert svg.startswith("<svg") and svg.count("<circle") >= 2 * 4


def test_sweep_is_deterministic(tmp_path):
    cfg = _small_cfg(sweep={"epsilons": [0.04]})
    E.write_sweep(E.relax_sweep(cfg), tmp_path / "a")
    E.write_sweep(E.relax_sweep(cfg), tmp_path / "b")
    assert (tmp_path / "a" / "sweep.csv").read_text() == (tmp_path / "b" / "sweep.csv").read_text()


def test_zero_amplitude_decay_stays_at_equilibrium(tmp_path):
    cfg = _small_cfg(ic={"type": "density_sine", "amplitude": 0.0}, time={"t_end": 0.5, "cfl": 0.8})
    res = E.decay(cfg)
    assert max(res.norms["total"]) <= 1e-12
    assert all(b > a for a, b in zip(res.times, res.times[1:]))
    E.write_decay(res, tmp_path)
    assert (tmp_path / "decay.csv").exists() and (tmp_path / "decay.svg").exists()


def test_short_decay_decreases():
    cfg = _small_cfg(
        relax={"eta": 1.0, "zeta": 1.0, "chi": 1.0},
        ic={"type": "density_sine", "amplitude": 1e-3},
        time={"t_end": 1.0, "cfl": 0.8},
        output={"every": 0.1},
    )
    res = E.decay(cfg)
    assert res.norms["total"][-1] < res.norms["total"][0]
    assert not res.flags
    assert res.metadata["norm"].startswith("discrete L2")

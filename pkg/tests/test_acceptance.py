"""Acceptance gate: the package-level behavioral contract, one test per
criterion.  These run against the shared standard small-data run (session
fixture) plus targeted auxiliary runs."""

import glob

import numpy as np
import pytest

import prandtl_lab as pl
from prandtl_lab import verify


def test_a1_roundtrip_order_and_closed_form():
    errs = []
    for nz in (128, 256):
        grid = pl.make_grid(pl.GridConfig(nz=nz))
        g = pl.Field(0.1 * np.cos(grid.x)[:, None]
                     * np.exp(-grid.z ** 2)[None, :], grid, 0.0)
        back = pl.g_from_u(pl.recover_u(g))
        num = pl.l2_weighted(pl.Field(back.values - g.values, grid, 0.0), 0.4)
        errs.append(num / pl.l2_weighted(g, 0.4))
    assert errs[0] <= 1e-3
    assert 4 * 0.8 <= errs[0] / errs[1] <= 4 * 1.2

    grid = pl.make_grid(pl.GridConfig())
    y = grid.z
    u = pl.Field(np.tile(y * np.exp(-y ** 2 / 4), (32, 1)), grid, 0.0)
    g = pl.g_from_u(u)
    assert np.max(np.abs(g.values - np.exp(-y ** 2 / 4)[None, :])) < 1e-4


def test_a2_weighted_poincare(std_run):
    grid = std_run["grid"]
    alpha = std_run["config"].lift.alpha
    rng = np.random.default_rng(2024)
    fields = [verify.random_admissible_field(grid, rng,
                                             t=float(rng.uniform(0, 10)))
              for _ in range(100)]
    rep = verify.verify_poincare(fields, alpha)
    assert rep.passed and rep.worst_margin >= -1e-10

    snaps = sorted(glob.glob(std_run["outdir"] + "/snapshots/*.fld"))
    assert len(snaps) >= 20
    snap_fields = [pl.load_snapshot(p, grid) for p in snaps]
    rep = verify.verify_poincare(snap_fields, alpha)
    assert rep.passed and rep.worst_margin >= -1e-10


def test_a3_decay_exponent(std_run):
    report = std_run["report"]
    assert report.termination == "t_end"
    norms = pl.read_csv(std_run["outdir"] + "/norms.csv")
    keep = norms["t"] >= 10.0
    slope, r2 = verify.fit_decay(norms["t"][keep], norms["X_sum"][keep],
                                 t_min=10.0)
    assert slope <= -1.0
    assert r2 >= 0.98
    assert report.decay_slope == pytest.approx(slope, abs=1e-9)


def test_a4_compensated_monotonicity(std_run):
    norms = pl.read_csv(std_run["outdir"] + "/norms.csv")
    comp = norms["decay_compensated"][norms["t"] >= 1.0]
    assert len(comp) > 10
    assert np.all(comp[1:] <= comp[:-1] * 1.01)


def test_a5_radius_floor(std_run):
    cfg = std_run["config"]
    grid = std_run["grid"]
    # calibrate the product constant independently, on random fields
    rng = np.random.default_rng(99)
    fields = [verify.random_admissible_field(grid, rng, t=1.0)
              for _ in range(6)]
    cal = verify.measure_product_constants(fields, tau=cfg.tau0,
                                           alpha=cfg.lift.alpha)
    assert cal.passed
    assert cal.worst_constant <= cfg.c0      # configured c0 covers it
    assert cfg.c2 == pytest.approx(6.0 * cfg.c0 * cfg.c1)

    radius = pl.read_csv(std_run["outdir"] + "/radius.csv")
    assert np.all(radius["tau"] >= radius["tau_lower_bound"])
    assert np.all(radius["tau"] >= cfg.tau0 / 2.0)
    h = std_run["report"].holder_modulus
    assert np.isfinite(h) and h > 0
    assert np.all(np.isfinite(radius["holder_modulus_running_max"]))


def test_a6_cross_formulation_equivalence():
    lift = pl.LiftParams()
    init = pl.InitialData(amplitude=0.05)
    rels = []
    for nz, dt in ((128, 0.01), (256, 0.005)):
        grid = pl.make_grid(pl.GridConfig(nz=nz))
        scfg = pl.SolverConfig(dt_init=dt, t_end=0.5)
        rels.append(pl.crosscheck(grid, init, scfg, lift=lift)["rel_l2"])
    assert rels[0] <= 1e-3
    assert rels[0] / rels[1] >= 2.5          # shrinks at the scheme's order


def test_a7_picard_contraction():
    cfg = pl.parse_config("configs/picard.cfg")
    grid = pl.make_grid(cfg.grid)
    rep = pl.run_picard(grid, cfg.init, cfg.solver, lift=cfg.lift,
                        tau_bar=cfg.tau0, epsilon=cfg.epsilon,
                        m_max=cfg.m_max)
    assert rep.n_iters == 8
    assert all(r <= 0.5 for r in rep.ratios)


def test_a8_instability_sanity():
    cfg = pl.parse_config_text(
        "solver.t_end = 10\nsolver.dt_init = 0.05\nnorms.m_max = 48\n"
        "init.family = single_mode\ninit.amplitude = 1.0\n")
    grid = pl.make_grid(cfg.grid)
    rep = pl.run_simulation(grid, cfg.init, cfg.solver, cfg.radius_state(),
                            lift=cfg.lift, m_max=cfg.m_max)
    cols, rows = rep.extra["tables"]["norms"]
    x0 = rows[0][2]
    grew = any(r[2] >= 10.0 * x0 for r in rows)
    assert rep.termination == "radius_collapse" or grew


def test_a9_inequality_suite(std_config):
    grid = pl.make_grid(std_config.grid)
    reports = verify.run_suite(grid, std_config.lift.alpha,
                               tau=std_config.tau0, trials=50, seed=17)
    assert all(r.passed for r in reports)
    dawson = [r for r in reports if r.name == "dawson_pointwise_bound"][0]
    assert dawson.worst_margin > 0

    # refinement stability of the measured constants
    fine = pl.make_grid(pl.GridConfig(nz=256))
    rng1, rng2 = (np.random.default_rng(5) for _ in range(2))
    coarse_fields = [verify.random_admissible_field(grid, rng1, t=1.0)
                     for _ in range(6)]
    fine_fields = [verify.random_admissible_field(fine, rng2, t=1.0)
                   for _ in range(6)]
    c_coarse = verify.verify_diagnostic_bounds(coarse_fields,
                                               std_config.lift.alpha)
    c_fine = verify.verify_diagnostic_bounds(fine_fields,
                                             std_config.lift.alpha)
    assert abs(c_coarse.worst_constant - c_fine.worst_constant) \
        <= 0.25 * c_coarse.worst_constant


def test_a10_determinism_and_dt_halving(tmp_path):
    text = ("solver.t_end = 2\nsolver.dt_init = 0.05\n"
            "solver.snapshot_every = 1\nnorms.m_max = 48\n"
            "init.amplitude = 0.01\n")
    cfg = pl.parse_config_text(text)
    grid = pl.make_grid(cfg.grid)
    paths = []
    for tag in ("one", "two"):
        out = str(tmp_path / tag)
        pl.run_simulation(grid, cfg.init, cfg.solver, cfg.radius_state(),
                          lift=cfg.lift, m_max=cfg.m_max, outdir=out,
                          run_id=cfg.run_id)
        paths.append(out)
    for name in ("norms.csv", "radius.csv"):
        a = open(f"{paths[0]}/{name}", "rb").read()
        b = open(f"{paths[1]}/{name}", "rb").read()
        assert a == b

    g0 = pl.InitialData(amplitude=0.05).build(grid)
    res = verify.two_run_consistency(grid, g0, cfg.lift, t_end=0.2, dt=4e-3)
    assert 3.0 <= res["ratio"] <= 5.0

import math

import numpy as np
import pytest
from scipy.integrate import quad
from scipy.special import erf

import prandtl_lab as pl
from prandtl_lab.errors import ConfigError, NumericalAbort


def test_solver_config_validation():
    with pytest.raises(ConfigError):
        pl.SolverConfig(nu=-0.1)
    with pytest.raises(ConfigError):
        pl.SolverConfig(mode=pl.SolverMode.GOOD_UNKNOWN_NU, nu=0.0)
    with pytest.raises(ConfigError):
        pl.SolverConfig(cfl=0.0)
    with pytest.raises(ConfigError):
        pl.SolverConfig(dt_init=-1.0)


def test_nu_mode_resolution_constraint():
    scfg = pl.SolverConfig(mode=pl.SolverMode.GOOD_UNKNOWN_NU, nu=0.05)
    with pytest.raises(ConfigError):
        scfg.check_grid(pl.make_grid(pl.GridConfig(nx=32)))
    scfg.check_grid(pl.make_grid(pl.GridConfig(nx=64)))


def test_zero_field_is_fixed_point():
    grid = pl.make_grid(pl.GridConfig())
    zero = pl.Field(np.zeros((32, 128)), grid, 0.0)
    for mode in (pl.SolverMode.GOOD_UNKNOWN, pl.SolverMode.VELOCITY_FORM):
        scfg = pl.SolverConfig(mode=mode, dt_init=0.02, t_end=0.1)
        out = pl.evolve(zero, scfg, pl.LiftParams(), [0.1])[0]
        assert np.max(np.abs(out.values)) < 1e-14


def test_heat_mode_exact_solution():
    # x-independent datum: v=0 and d_x g=0, so the dynamics reduce to
    # diffusion plus 1/<t> damping, solvable in closed form
    grid = pl.make_grid(pl.GridConfig(nx=4))
    A, s0 = 0.1, 0.25
    g0 = pl.Field(np.tile(A * np.exp(-grid.z ** 2), (4, 1)), grid, 0.0)
    scfg = pl.SolverConfig(dt_init=0.005, t_end=0.5)
    out = pl.evolve(g0, scfg, pl.LiftParams(), [0.5])[0]
    t = 0.5
    y = grid.y_of(t)
    exact = (A / (t + 1)) * math.sqrt(s0 / (s0 + t)) \
        * np.exp(-y ** 2 / (4 * (s0 + t)))
    rel = np.max(np.abs(out.values - exact[None, :])) / np.max(exact)
    assert rel < 1e-4


def test_heat_mode_physical_y_agrees():
    # the same dynamics in fixed physical coordinates
    A, s0 = 0.1, 0.25
    grid = pl.make_grid(pl.GridConfig(nx=4, mode=pl.CoordMode.PHYSICAL_Y,
                                      zmax=14.0, nz=160))
    g0 = pl.Field(np.tile(A * np.exp(-grid.z ** 2), (4, 1)), grid, 0.0)
    scfg = pl.SolverConfig(dt_init=0.005, t_end=0.5)
    out = pl.evolve(g0, scfg, pl.LiftParams(), [0.5])[0]
    t = 0.5
    exact = (A / (t + 1)) * math.sqrt(s0 / (s0 + t)) \
        * np.exp(-grid.z ** 2 / (4 * (s0 + t)))
    rel = np.max(np.abs(out.values - exact[None, :])) / np.max(exact)
    assert rel < 1e-4


def _mms_forcing(grid, amp, kappa):
    """Manufactured solution amp e^{-t} cos(x) e^{-z^2} with the recovery
    operators evaluated in closed form (erf) and one adaptive quadrature."""
    z = grid.z

    def w_prof(s):
        return math.sqrt(math.pi / 3) * math.exp(-s ** 2 / 4) \
            * erf(math.sqrt(3) * s / 2)

    W = np.array([w_prof(s) for s in z])
    P = np.array([quad(w_prof, 0, zi)[0] for zi in z])
    Phi = erf(z / 2)
    cosx, sinx = np.cos(grid.x), np.sin(grid.x)
    ez2 = np.exp(-z ** 2)

    def forcing(t, g):
        T = t + 1.0
        et = math.exp(-t)
        gs = amp * et * cosx[:, None] * ez2[None, :]
        gx = -amp * et * sinx[:, None] * ez2[None, :]
        us = amp * et * math.sqrt(T) * cosx[:, None] * W[None, :]
        vs = amp * et * T * sinx[:, None] * P[None, :]
        rhs = ((4 * z ** 2 - 2)[None, :] / T) * gs \
            - (z ** 2)[None, :] / T * gs \
            - (us + kappa * Phi[None, :]) * gx \
            + (vs / math.sqrt(T)) * (2 * z)[None, :] * gs \
            - gs / T + us * vs / (2 * T)
        return -gs - rhs

    return forcing


def test_manufactured_solution_full_nonlinear():
    amp, kappa = 0.05, 1.0
    errs = []
    for nz, dt in ((96, 4e-3), (192, 2e-3)):
        grid = pl.make_grid(pl.GridConfig(nz=nz))
        forcing = _mms_forcing(grid, amp, kappa)
        g0 = pl.Field(amp * np.cos(grid.x)[:, None]
                      * np.exp(-grid.z ** 2)[None, :], grid, 0.0)
        scfg = pl.SolverConfig(dt_init=dt, t_end=0.3)
        out = pl.evolve(g0, scfg, pl.LiftParams(kappa=kappa), [0.3],
                        forcing=forcing)[0]
        exact = amp * math.exp(-0.3) * np.cos(grid.x)[:, None] \
            * np.exp(-grid.z ** 2)[None, :]
        errs.append(np.max(np.abs(out.values - exact)) / np.max(np.abs(exact)))
    assert errs[0] < 1e-3
    assert errs[0] / errs[1] > 3.0


def test_second_order_in_time():
    grid = pl.make_grid(pl.GridConfig())
    g0 = pl.InitialData(amplitude=0.05).build(grid)
    res = pl.verify.two_run_consistency(grid, g0, pl.LiftParams(),
                                        t_end=0.2, dt=4e-3)
    assert 3.0 <= res["ratio"] <= 5.0


def test_boundary_conditions_enforced():
    grid = pl.make_grid(pl.GridConfig())
    g0 = pl.InitialData(amplitude=0.05).build(grid)
    scfg = pl.SolverConfig(dt_init=0.01, t_end=0.2)
    out = pl.evolve(g0, scfg, pl.LiftParams(), [0.2])[0]
    assert np.max(np.abs(out.values[:, -1])) < 1e-13          # decay row
    wall_slope = out.values @ grid.d1[0, :]
    assert np.max(np.abs(wall_slope)) < 1e-10                 # Neumann row


def test_cfl_halving_then_abort():
    # an enormous datum advects faster than any admissible step
    grid = pl.make_grid(pl.GridConfig())
    vals = 1e6 * np.cos(grid.x)[:, None] * np.exp(-grid.z ** 2)[None, :]
    g0 = pl.Field(vals, grid, 0.0)
    scfg = pl.SolverConfig(dt_init=0.05, t_end=1.0)
    with pytest.raises(NumericalAbort):
        pl.evolve(g0, scfg, pl.LiftParams(), [1.0])


def test_run_simulation_report_and_collapse():
    cfg = pl.parse_config_text(
        "solver.t_end = 10\nsolver.dt_init = 0.05\nnorms.m_max = 48\n"
        "init.family = single_mode\ninit.amplitude = 1.0\n")
    grid = pl.make_grid(cfg.grid)
    rep = pl.run_simulation(grid, cfg.init, cfg.solver, cfg.radius_state(),
                            lift=cfg.lift, m_max=cfg.m_max)
    assert rep.termination == "radius_collapse"
    assert rep.t_final < 10.0


def test_run_simulation_writes_run_directory(tmp_path):
    cfg = pl.parse_config_text(
        "solver.t_end = 1\nsolver.dt_init = 0.05\nsolver.snapshot_every = 0.5\n"
        "norms.m_max = 48\ninit.amplitude = 0.01\n")
    grid = pl.make_grid(cfg.grid)
    out = str(tmp_path / "run")
    rep = pl.run_simulation(grid, cfg.init, cfg.solver, cfg.radius_state(),
                            lift=cfg.lift, m_max=cfg.m_max, outdir=out,
                            run_id="testrun")
    assert rep.termination == "t_end"
    norms = pl.read_csv(f"{out}/norms.csv")
    assert list(norms) == ["t", "tau", "X_sum", "Y_sum", "D_sum", "Z_sum",
                           "B_sum", "tildeB_sum", "tail_ratio",
                           "decay_compensated"]
    assert norms["t"][-1] == pytest.approx(1.0)
    radius = pl.read_csv(f"{out}/radius.csv")
    assert np.all(np.diff(radius["tau"]) <= 0)
    assert np.all(radius["tau"] >= radius["tau_lower_bound"])
    snap = pl.load_snapshot(rep.snapshot_index[-1][1], grid)
    assert snap.t == pytest.approx(1.0)


def test_crosscheck_formulations_close():
    cfg = pl.parse_config_text("init.amplitude = 0.05")
    grid = pl.make_grid(cfg.grid)
    res = pl.crosscheck(grid, cfg.init, cfg.solver, lift=cfg.lift,
                        t_compare=0.5)
    assert res["rel_l2"] <= 1e-3

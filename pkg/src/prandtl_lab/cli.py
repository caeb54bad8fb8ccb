"""Command-line entry point.

Subcommands: simulate (full run with norms/radius CSVs and snapshots),
picard (two-step iteration contraction diagnostics), crosscheck (good-unknown
vs velocity formulation), verify (inequality certification sweep).

Exit codes: 0 success, 2 configuration error, 3 numerical abort
(collapse/NaN/CFL), 4 parameter-regime violation in strict mode.
"""

from __future__ import annotations

import argparse
import sys

from .config import parse_config
from .errors import ConfigError, NumericalAbort, RegimeError
from .grid import make_grid
from .solver import crosscheck, run_picard, run_simulation
from . import verify as verify_mod


def _cmd_simulate(args) -> int:
    cfg = parse_config(args.config)
    grid = make_grid(cfg.grid)
    outdir = None if args.no_output else f"{args.out}/run-{cfg.run_id}"
    if outdir is not None:
        import os
        os.makedirs(outdir, exist_ok=True)
        with open(f"{outdir}/config.echo", "w") as fh:
            fh.write(cfg.echo)
    report = run_simulation(grid, cfg.init, cfg.solver, cfg.radius_state(),
                            lift=cfg.lift, m_max=cfg.m_max, outdir=outdir,
                            run_id=cfg.run_id)
    print(f"run {cfg.run_id}: termination={report.termination} "
          f"t_final={report.t_final:g} tau_final={report.extra['tau_final']:g}")
    if outdir is not None:
        print(f"outputs in {outdir}")
    return 0 if report.termination == "t_end" else 3


def _cmd_picard(args) -> int:
    cfg = parse_config(args.config)
    grid = make_grid(cfg.grid)
    rep = run_picard(grid, cfg.init, cfg.solver, lift=cfg.lift,
                     tau_bar=cfg.tau0, epsilon=cfg.epsilon, m_max=cfg.m_max)
    print(f"picard: {rep.n_iters} iterates, dt={rep.dt:g}")
    for i, a in enumerate(rep.distances, start=2):
        line = f"  A_{i} = {a:.6e}"
        if i - 2 < len(rep.ratios):
            line += f"   ratio A_{i + 1}/A_{i} = {rep.ratios[i - 2]:.4f}"
        print(line)
    return 0


def _cmd_crosscheck(args) -> int:
    cfg = parse_config(args.config)
    grid = make_grid(cfg.grid)
    res = crosscheck(grid, cfg.init, cfg.solver, lift=cfg.lift,
                     t_compare=args.t)
    print(f"crosscheck at t={res['t']:g}: rel_l2={res['rel_l2']:.6e} "
          f"(abs {res['abs_l2']:.3e}, |g| {res['norm_g']:.3e})")
    return 0


def _cmd_verify(args) -> int:
    cfg = parse_config(args.config)
    grid = make_grid(cfg.grid)
    reports = verify_mod.run_suite(grid, cfg.lift.alpha, tau=cfg.tau0,
                                   trials=args.trials, seed=args.seed)
    ok = True
    for r in reports:
        print(r.line())
        ok = ok and r.passed
    return 0 if ok else 3


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="prandtl-lab",
                                description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("simulate", help="evolve g and track the norm ladder")
    sp.add_argument("--config", required=True)
    sp.add_argument("--out", default=".", help="parent directory for run-<id>/")
    sp.add_argument("--no-output", action="store_true",
                    help="skip the run directory (report to stdout only)")
    sp.set_defaults(func=_cmd_simulate)

    sp = sub.add_parser("picard", help="two-step iteration contraction check")
    sp.add_argument("--config", required=True)
    sp.set_defaults(func=_cmd_picard)

    sp = sub.add_parser("crosscheck",
                        help="compare the two formulations of the same flow")
    sp.add_argument("--config", required=True)
    sp.add_argument("--t", type=float, default=0.5)
    sp.set_defaults(func=_cmd_crosscheck)

    sp = sub.add_parser("verify", help="certify the weighted inequalities")
    sp.add_argument("--config", required=True)
    sp.add_argument("--trials", type=int, default=100)
    sp.add_argument("--seed", type=int, default=0)
    sp.set_defaults(func=_cmd_verify)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except RegimeError as exc:
        print(f"regime error: {exc}", file=sys.stderr)
        return 4
    except NumericalAbort as exc:
        print(f"numerical abort: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())

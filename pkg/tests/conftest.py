import numpy as np
import pytest

import prandtl_lab as pl


@pytest.fixture(scope="session")
def std_config():
    return pl.parse_config("configs/standard.cfg")


@pytest.fixture(scope="session")
def std_run(std_config, tmp_path_factory):
    """The standard small-data run to t=100, shared by the acceptance gate."""
    outdir = str(tmp_path_factory.mktemp("stdrun") / f"run-{std_config.run_id}")
    grid = pl.make_grid(std_config.grid)
    report = pl.run_simulation(
        grid, std_config.init, std_config.solver, std_config.radius_state(),
        lift=std_config.lift, m_max=std_config.m_max, outdir=outdir,
        run_id=std_config.run_id,
    )
    return {"report": report, "grid": grid, "outdir": outdir,
            "config": std_config}


@pytest.fixture()
def grid128():
    return pl.make_grid(pl.GridConfig())


@pytest.fixture()
def rng():
    return np.random.default_rng(12345)

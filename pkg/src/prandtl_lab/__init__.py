"""Numerical laboratory for the 2D boundary-layer equations in the
linearly-good-unknown formulation: weighted norm ladders, the tangential
analyticity-radius ODE, and certification of the supporting inequalities."""

from .config import RunConfig, parse_config, parse_config_text
from .errors import (ConfigError, LadderTruncationError, NumericalAbort,
                     PrandtlLabError, RadiusCollapseError, RegimeError)
from .goodunknown import (StateBundle, g_from_u, omega_from_u, recover_u,
                          recover_v, state_from_g)
from .grid import (CoordMode, Field, Grid, GridConfig, dx_spectral, dy_field,
                   l2_weighted, make_grid, weight_theta)
from .lift import LiftParams, coeff_a, dawson_fn, lift_phi, phi_profile
from .norms import NormProfile, check_B_tildeB, factor_Mm, seminorm_ladder
from .radius import (RadiusState, check_regime, holder_modulus,
                     lifespan_T_eps, step_tau, tau_lower_bound)
from .runio import RunReport, load_snapshot, read_csv, save_snapshot
from .solver import (InitialData, PicardReport, SolverConfig, SolverMode,
                     crosscheck, evolve, run_picard, run_simulation,
                     rhs_good_unknown, rhs_velocity, step_imex, v_from_u)

from . import verify

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]

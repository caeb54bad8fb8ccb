"""Flat key=value run configuration.

One key per line, '#' starts a comment, whitespace around '=' is ignored.
Unknown keys are a hard error (silent typos in a long sweep are worse than a
crash).  The weight exponent defaults to alpha = (1 - delta)/2 with
delta = eps log(1/eps), so changing run.epsilon retunes the whole weighted
framework consistently; an explicit weight.alpha overrides it.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass

from .errors import ConfigError
from .grid import CoordMode, GridConfig
from .lift import LiftParams
from .radius import RadiusState
from .solver import InitialData, SolverConfig, SolverMode

_BOOL = {"true": True, "false": False, "1": True, "0": False,
         "yes": True, "no": False}

# key -> (type tag, default); None default means derived elsewhere
_SCHEMA = {
    "grid.nx": ("int", 32),
    "grid.lx": ("float", 2.0 * math.pi),
    "grid.nz": ("int", 128),
    "grid.zmax": ("float", 12.0),
    "grid.mode": ("str", "self_similar_z"),
    "grid.stretch": ("float", 0.0),
    "lift.kappa": ("float", 1.0),
    "weight.alpha": ("float", None),
    "run.epsilon": ("float", 0.1),
    "run.strict_regime": ("bool", False),
    "radius.tau0": ("float", 1.0),
    "radius.c0": ("float", 1.0),
    "radius.c1": ("float", 2.0),
    "radius.c2": ("float", None),
    "norms.m_max": ("int", 20),
    "solver.mode": ("str", "good_unknown"),
    "solver.nu": ("float", 0.0),
    "solver.dt_init": ("float", 0.01),
    "solver.t_end": ("float", 10.0),
    "solver.cfl": ("float", 0.4),
    "solver.snapshot_every": ("float", 1.0),
    "solver.picard_iters": ("int", 8),
    "init.family": ("str", "gaussian_bump"),
    "init.amplitude": ("float", 0.1),
    "init.x_width": ("float", 1.0),
    "init.z_width": ("float", 1.0),
}


@dataclass(frozen=True)
class RunConfig:
    grid: GridConfig
    lift: LiftParams
    solver: SolverConfig
    init: InitialData
    tau0: float
    c0: float
    c1: float
    c2: float
    epsilon: float
    strict_regime: bool
    m_max: int
    run_id: str
    echo: str

    @property
    def delta(self) -> float:
        return self.epsilon * math.log(1.0 / self.epsilon)

    def radius_state(self) -> RadiusState:
        return RadiusState(tau=self.tau0, tau0=self.tau0, c0=self.c0,
                           c2=self.c2, epsilon=self.epsilon,
                           strict=self.strict_regime)


def _coerce(key: str, tag: str, raw: str):
    try:
        if tag == "int":
            return int(raw)
        if tag == "float":
            return float(raw)
        if tag == "bool":
            if raw.lower() not in _BOOL:
                raise ValueError(raw)
            return _BOOL[raw.lower()]
        return raw
    except ValueError as exc:
        raise ConfigError(f"bad value for {key}: {raw!r} is not {tag}") from exc


def parse_config_text(text: str) -> RunConfig:
    values = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key=value, got {line!r}")
        key, raw = (s.strip() for s in line.split("=", 1))
        if key not in _SCHEMA:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        if key in values:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        values[key] = _coerce(key, _SCHEMA[key][0], raw)

    def get(key):
        if key in values:
            return values[key]
        return _SCHEMA[key][1]

    epsilon = get("run.epsilon")
    if not (0 < epsilon < 1):
        raise ConfigError("run.epsilon must lie in (0, 1)")
    delta = epsilon * math.log(1.0 / epsilon)
    alpha = get("weight.alpha")
    if alpha is None:
        alpha = (1.0 - delta) / 2.0
    c0 = get("radius.c0")
    c1 = get("radius.c1")
    c2 = get("radius.c2")
    if c2 is None:
        c2 = 6.0 * c0 * c1

    try:
        mode = CoordMode(get("grid.mode"))
    except ValueError:
        raise ConfigError(f"grid.mode must be one of "
                          f"{[m.value for m in CoordMode]}")
    try:
        smode = SolverMode(get("solver.mode"))
    except ValueError:
        raise ConfigError(f"solver.mode must be one of "
                          f"{[m.value for m in SolverMode]}")

    grid = GridConfig(nx=get("grid.nx"), lx=get("grid.lx"), nz=get("grid.nz"),
                      zmax=get("grid.zmax"), mode=mode,
                      stretch=get("grid.stretch"))
    try:
        lift = LiftParams(kappa=get("lift.kappa"), alpha=alpha)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    solver = SolverConfig(mode=smode, nu=get("solver.nu"),
                          dt_init=get("solver.dt_init"),
                          t_end=get("solver.t_end"), cfl=get("solver.cfl"),
                          snapshot_every=get("solver.snapshot_every"),
                          picard_iters=get("solver.picard_iters"))
    init = InitialData(family=get("init.family"),
                       amplitude=get("init.amplitude"),
                       x_width=get("init.x_width"),
                       z_width=get("init.z_width"))
    if get("radius.tau0") <= 0:
        raise ConfigError("radius.tau0 must be positive")
    if get("norms.m_max") < 0:
        raise ConfigError("norms.m_max must be nonnegative")

    echo_lines = []
    for key in sorted(_SCHEMA):
        if key == "weight.alpha":
            val = alpha
        elif key == "radius.c2":
            val = c2
        else:
            val = get(key)
        echo_lines.append(f"{key} = {repr(val) if isinstance(val, float) else val}")
    echo = "\n".join(echo_lines) + "\n"
    run_id = hashlib.sha256(echo.encode()).hexdigest()[:12]

    cfg = RunConfig(grid=grid, lift=lift, solver=solver, init=init,
                    tau0=get("radius.tau0"), c0=c0, c1=c1, c2=c2,
                    epsilon=epsilon, strict_regime=get("run.strict_regime"),
                    m_max=get("norms.m_max"), run_id=run_id, echo=echo)
    # fail at parse time, not mid-run
    cfg.radius_state()
    return cfg


def parse_config(path: str) -> RunConfig:
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    return parse_config_text(text)

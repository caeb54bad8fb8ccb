"""Run-directory layout, snapshot persistence, CSV emission, and the
machine-readable report contract.

Layout: run-<id>/{config.echo, norms.csv, radius.csv, report.txt,
snapshots/*.fld}.  CSV columns are documented in FORMATS.md and are
append-only across schema versions.  All floats are written with repr()
(shortest round-trip), so identical runs produce bitwise-identical files.
"""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass, field

import numpy as np

from .grid import CoordMode, Field, Grid, GridConfig, make_grid

SNAPSHOT_SCHEMA = 1

NORMS_COLUMNS = ["t", "tau", "X_sum", "Y_sum", "D_sum", "Z_sum", "B_sum",
                 "tildeB_sum", "tail_ratio", "decay_compensated"]
RADIUS_COLUMNS = ["t", "tau", "tau_lower_bound", "B_norm",
                  "holder_modulus_running_max"]


@dataclass
class RunReport:
    run_id: str
    termination: str            # t_end | radius_collapse | nan | cfl_abort
    decay_slope: float = float("nan")
    decay_r2: float = float("nan")
    max_compensated_norm: float = float("nan")
    holder_modulus: float = float("nan")
    t_final: float = 0.0
    csv_paths: list = field(default_factory=list)
    snapshot_index: list = field(default_factory=list)   # (t, path)
    extra: dict = field(default_factory=dict)


def save_snapshot(f: Field, path: str, name: str = "g") -> str:
    f.check_finite()
    g = f.grid
    header = {
        "schema": SNAPSHOT_SCHEMA,
        "nx": g.nx, "nz": g.nz, "lx": g.lx, "zmax": g.zmax,
        "mode": g.mode.value, "stretch": g.stretch,
        "t": f.t, "name": name,
    }
    os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
    with open(path, "wb") as fh:
        fh.write((json.dumps(header, sort_keys=True) + "\n").encode())
        fh.write(f.values.astype("<f8").tobytes(order="C"))
    return path


def load_snapshot(path: str, grid: Grid | None = None) -> Field:
    with open(path, "rb") as fh:
        header_line = fh.readline()
        payload = fh.read()
    header = json.loads(header_line)
    if header.get("schema") != SNAPSHOT_SCHEMA:
        raise ValueError(f"snapshot schema mismatch: {header.get('schema')}")
    nx, nz = header["nx"], header["nz"]
    expected = nx * nz * 8
    if len(payload) != expected:
        raise ValueError(
            f"payload-length: expected {expected} bytes, got {len(payload)}"
        )
    if grid is None:
        grid = make_grid(GridConfig(
            nx=nx, lx=header["lx"], nz=nz, zmax=header["zmax"],
            mode=CoordMode(header["mode"]), stretch=header["stretch"],
        ))
    else:
        same = (grid.nx == nx and grid.nz == nz
                and grid.lx == header["lx"] and grid.zmax == header["zmax"]
                and grid.mode.value == header["mode"]
                and grid.stretch == header["stretch"])
        if not same:
            raise ValueError(
                "snapshot grid mismatch: file carries "
                f"(nx={nx}, nz={nz}, mode={header['mode']}) incompatible with "
                "the current grid"
            )
    values = np.frombuffer(payload, dtype="<f8").reshape(nx, nz)
    return Field(values.copy(), grid, header["t"])


def _fmt(v) -> str:
    if isinstance(v, float):
        return repr(v)
    return str(v)


def write_csv(path: str, columns: list, rows: list) -> str:
    os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
    with open(path, "w", newline="") as fh:
        fh.write(",".join(columns) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(v) for v in row) + "\n")
    return path


def read_csv(path: str) -> dict:
    """CSV as {column: list-of-floats}; fails loudly on schema drift."""
    with open(path) as fh:
        header = fh.readline().strip().split(",")
        cols = {name: [] for name in header}
        for line in fh:
            line = line.strip()
            if not line:
                continue
            parts = line.split(",")
            if len(parts) != len(header):
                raise ValueError(f"malformed CSV row in {path}: {line!r}")
            for name, val in zip(header, parts):
                cols[name].append(float(val))
    return {k: np.asarray(v) for k, v in cols.items()}


def fit_loglog_slope(t: np.ndarray, values: np.ndarray) -> tuple:
    """Least-squares slope of log(values) against log(t+1), with r^2."""
    if len(t) < 2:
        raise ValueError("insufficient-samples")
    lx = np.log(np.asarray(t) + 1.0)
    ly = np.log(np.asarray(values))
    a = np.vstack([lx, np.ones_like(lx)]).T
    coef, *_ = np.linalg.lstsq(a, ly, rcond=None)
    fitted = a @ coef
    ss_res = float(np.sum((ly - fitted) ** 2))
    ss_tot = float(np.sum((ly - ly.mean()) ** 2))
    r2 = 1.0 if ss_tot == 0 else 1.0 - ss_res / ss_tot
    return float(coef[0]), r2


def write_report(path: str, report: RunReport) -> str:
    os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
    lines = [
        f"run_id: {report.run_id}",
        f"termination: {report.termination}",
        f"t_final: {_fmt(report.t_final)}",
        f"decay_slope: {_fmt(report.decay_slope)}",
        f"decay_r2: {_fmt(report.decay_r2)}",
        f"max_compensated_norm: {_fmt(report.max_compensated_norm)}",
        f"holder_modulus: {_fmt(report.holder_modulus)}",
    ]
    for key in sorted(report.extra):
        lines.append(f"{key}: {_fmt(report.extra[key])}")
    for p in report.csv_paths:
        lines.append(f"csv: {p}")
    for t, p in report.snapshot_index:
        lines.append(f"snapshot: {_fmt(float(t))} {p}")
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")
    return path


def read_report(path: str) -> dict:
    out: dict = {"csv": [], "snapshot": []}
    with open(path) as fh:
        for line in fh:
            if ":" not in line:
                continue
            key, val = line.split(":", 1)
            key, val = key.strip(), val.strip()
            if key in ("csv", "snapshot"):
                out[key].append(val)
            else:
                out[key] = val
    return out


def holder_running_max(ts, taus) -> list:
    """Per-row running max of |dtau| / sqrt(dt) over all earlier rows."""
    out = []
    best = 0.0
    for i in range(len(ts)):
        for j in range(i):
            dt = ts[i] - ts[j]
            if dt > 0:
                best = max(best, abs(taus[i] - taus[j]) / math.sqrt(dt))
        out.append(best)
    return out

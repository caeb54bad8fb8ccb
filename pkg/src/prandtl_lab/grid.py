"""Discrete domain: tangential Fourier grid x normal grid, coordinate maps,
Gaussian weight machinery and weighted quadrature.

Coordinates. The normal node set ``z`` is stored in heat self-similar units
z = y / sqrt(t+1).  In SELF_SIMILAR_Z mode the nodes are time-independent and
the physical measure is dy = sqrt(<t>) dz; in PHYSICAL_Y mode the same node
array is interpreted as physical y (reference time t=0, where y == z).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import ConfigError

TWO_PI = 2.0 * math.pi


class CoordMode(str, Enum):
    PHYSICAL_Y = "physical_y"
    SELF_SIMILAR_Z = "self_similar_z"


class QuadratureTailWarning(UserWarning):
    """Last 10% of normal nodes carry a non-negligible share of the integral."""


@dataclass(frozen=True)
class GridConfig:
    nx: int = 32
    lx: float = TWO_PI
    nz: int = 128
    zmax: float = 12.0
    mode: CoordMode = CoordMode.SELF_SIMILAR_Z
    stretch: float = 0.0


@dataclass(frozen=True, eq=False)
class Grid:
    """Immutable discrete domain.  Arrays are shared, never mutated."""

    nx: int
    lx: float
    nz: int
    zmax: float
    mode: CoordMode
    stretch: float
    x: np.ndarray          # (nx,) tangential nodes in [0, lx)
    z: np.ndarray          # (nz,) normal nodes, z[0]=0, z[-1]=zmax, increasing
    trapz_w: np.ndarray    # (nz,) composite trapezoid weights on z
    d1: np.ndarray         # (nz, nz) 1st derivative in z, 4th order
    d2: np.ndarray         # (nz, nz) 2nd derivative in z, 4th order
    kx: np.ndarray         # (nx//2+1,) rfft wavenumbers (units of 2*pi/lx)
    dealias: np.ndarray    # (nx//2+1,) bool, True = mode kept (2/3 rule)

    @property
    def dx(self) -> float:
        return self.lx / self.nx

    @property
    def dz_min(self) -> float:
        return float(np.min(np.diff(self.z)))

    def metric_dy(self, t: float) -> float:
        """Jacobian dy/dz entering the normal quadrature (1 in physical mode)."""
        if self.mode is CoordMode.SELF_SIMILAR_Z:
            return math.sqrt(t + 1.0)
        return 1.0

    def z_of(self, t: float) -> np.ndarray:
        """Self-similar coordinate of the normal nodes at time t."""
        if self.mode is CoordMode.SELF_SIMILAR_Z:
            return self.z
        return self.z / math.sqrt(t + 1.0)

    def y_of(self, t: float) -> np.ndarray:
        """Physical normal coordinate of the nodes at time t."""
        if self.mode is CoordMode.SELF_SIMILAR_Z:
            return self.z * math.sqrt(t + 1.0)
        return self.z


@dataclass(eq=False)
class Field:
    """Real-valued sample on the tensor grid; carrier for g, u, v, omega, phi."""

    values: np.ndarray     # (nx, nz)
    grid: Grid
    t: float = 0.0

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if self.values.shape != (self.grid.nx, self.grid.nz):
            raise ValueError(
                f"field shape {self.values.shape} does not match grid "
                f"({self.grid.nx}, {self.grid.nz})"
            )
        if self.t < 0:
            raise ValueError("field time must be nonnegative")

    def check_finite(self) -> "Field":
        if not np.all(np.isfinite(self.values)):
            raise ValueError("field contains non-finite entries")
        return self

    def copy(self) -> "Field":
        return Field(self.values.copy(), self.grid, self.t)


def _fornberg_weights(xi: float, nodes: np.ndarray, order: int) -> np.ndarray:
    """Finite-difference weights for d^order/dx^order at xi on arbitrary nodes.

    Fornberg's recursive algorithm; returns weights for all given nodes.
    """
    n = len(nodes)
    c = np.zeros((n, order + 1))
    c1 = 1.0
    c4 = nodes[0] - xi
    c[0, 0] = 1.0
    for i in range(1, n):
        mn = min(i, order)
        c2 = 1.0
        c5 = c4
        c4 = nodes[i] - xi
        for j in range(i):
            c3 = nodes[i] - nodes[j]
            c2 *= c3
            if j == i - 1:
                for k in range(mn, 0, -1):
                    c[i, k] = c1 * (k * c[i - 1, k - 1] - c5 * c[i - 1, k]) / c2
                c[i, 0] = -c1 * c5 * c[i - 1, 0] / c2
            for k in range(mn, 0, -1):
                c[j, k] = (c4 * c[j, k] - k * c[j, k - 1]) / c3
            c[j, 0] = c4 * c[j, 0] / c3
        c1 = c2
    return c[:, order]


def _derivative_matrix(z: np.ndarray, order: int, stencil: int) -> np.ndarray:
    """Dense banded-in-structure derivative matrix from local stencils."""
    n = len(z)
    if n < stencil:
        raise ValueError("grid too small for requested stencil")
    d = np.zeros((n, n))
    half = stencil // 2
    for i in range(n):
        lo = min(max(i - half, 0), n - stencil)
        sel = slice(lo, lo + stencil)
        d[i, sel] = _fornberg_weights(z[i], z[sel], order)
    return d


def _trapz_weights(z: np.ndarray) -> np.ndarray:
    w = np.zeros_like(z)
    dz = np.diff(z)
    w[:-1] += dz / 2.0
    w[1:] += dz / 2.0
    return w


def make_grid(config: GridConfig) -> Grid:
    nx, nz = config.nx, config.nz
    if nx < 4 or (nx & (nx - 1)) != 0:
        raise ConfigError("n_x must be a power of two >= 4")
    if nz < 16:
        raise ConfigError("n_z must be >= 16")
    if config.lx <= 0:
        raise ConfigError("l_x must be positive")
    if config.zmax < 8.0:
        raise ConfigError(
            "weight-tail: z_max must be >= 8 so exp(alpha z^2/4) times "
            "Gaussian data decays below 1e-6 relative at the boundary"
        )
    if config.stretch < 0:
        raise ConfigError("stretch must be nonnegative")

    x = np.arange(nx) * (config.lx / nx)
    zeta = np.linspace(0.0, 1.0, nz)
    if config.stretch > 1e-12:
        s = config.stretch
        z = config.zmax * np.sinh(s * zeta) / math.sinh(s)
    else:
        z = config.zmax * zeta
    z[0] = 0.0
    z[-1] = config.zmax

    # 1st derivative: 5-point stencils (4th order incl. one-sided edges).
    # 2nd derivative: 6-point stencils (4th order incl. one-sided edges).
    d1 = _derivative_matrix(z, 1, 5)
    d2 = _derivative_matrix(z, 2, 6)

    kx = np.arange(nx // 2 + 1, dtype=float)
    dealias = kx <= (nx / 3.0)

    return Grid(
        nx=nx, lx=config.lx, nz=nz, zmax=config.zmax,
        mode=config.mode, stretch=config.stretch,
        x=x, z=z, trapz_w=_trapz_weights(z), d1=d1, d2=d2,
        kx=kx, dealias=dealias,
    )


def weight_theta(alpha: float, t: float, y) -> np.ndarray:
    """Gaussian weight exp(alpha y^2 / (4<t>)) = exp(alpha z^2 / 4).

    Multiplicative: theta_a * theta_b = theta_{a+b} pointwise.  Exponents
    beyond 700 would overflow double precision; all internal consumers work
    with exponent differences, so this guard never fires on a valid grid.
    """
    if t < 0:
        raise ValueError("t must be nonnegative")
    expo = alpha * np.asarray(y, dtype=float) ** 2 / (4.0 * (t + 1.0))
    if np.any(np.abs(expo) > 700.0):
        raise OverflowError("weight exponent exceeds double-precision range")
    return np.exp(expo)


def theta_sq_exponent(grid: Grid, alpha: float, t: float) -> np.ndarray:
    """log(theta_alpha^2) on the normal nodes at time t."""
    z = grid.z_of(t)
    return alpha * z ** 2 / 2.0


def dx_spectral(f: Field, order: int = 1, dealias: bool = False) -> Field:
    """Tangential derivative via rfft; exact for band-limited data."""
    g = f.grid
    fh = np.fft.rfft(f.values, axis=0)
    k = 2.0 * math.pi / g.lx * g.kx
    fh *= (1j * k[:, None]) ** order
    if dealias:
        fh[~g.dealias, :] = 0.0
    return Field(np.fft.irfft(fh, n=g.nx, axis=0), g, f.t)


def dy_field(f: Field) -> Field:
    """Normal derivative d/dy with the module's 4th-order stencil."""
    g = f.grid
    vals = f.values @ g.d1.T
    if g.mode is CoordMode.SELF_SIMILAR_Z:
        vals = vals / math.sqrt(f.t + 1.0)
    return Field(vals, g, f.t)


def l2_weighted(f: Field, alpha: float) -> float:
    """Composite-quadrature approximation of ||theta_alpha f||_{L^2(H)}.

    Tangentially exact Fourier quadrature (mean times lx); trapezoid in the
    normal direction with the physical measure dy (so SELF_SIMILAR_Z mode
    carries the <t>^{1/4} factor).  Fixed summation order for determinism.
    """
    f.check_finite()
    g = f.grid
    w = g.trapz_w * np.exp(theta_sq_exponent(g, alpha, f.t)) * g.metric_dy(f.t)
    col = (f.values ** 2).sum(axis=0)
    contrib = col * w
    total = float(contrib.sum())
    tail_n = max(1, g.nz // 10)
    tail = float(contrib[-tail_n:].sum())
    if total > 0 and tail > 1e-6 * total:
        warnings.warn(
            "quadrature tail: last 10% of normal nodes contribute "
            f"{tail / total:.2e} of the weighted integral",
            QuadratureTailWarning,
            stacklevel=2,
        )
    return math.sqrt(g.dx * total)

"""Bidirectional map between the prognostic variable g and the diagnostic
velocities: g = d_y u + (y/(2<t>)) u, and the recovery operators

    u = U(g):  u(y) = int_0^y g(s) exp((s^2 - y^2)/(4<t>)) ds
    v = V(g):  v(y) = -int_0^y d_x u(s) ds.

The recovery kernel is evaluated with exponent differences only (the factors
exp((s^2 - y^2)/(4<t>)) are <= 1 on the cumulative path), so no large positive
exponentials ever appear.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .grid import CoordMode, Field, dx_spectral, dy_field


@dataclass(eq=False)
class StateBundle:
    g: Field
    u: Field
    v: Field
    t: float
    omega: Field | None = None   # derived on demand, never independent state


def _z_and_scale(f: Field):
    """Self-similar nodes and the dy = scale * d(node) jacobian."""
    g = f.grid
    tb = f.t + 1.0
    if g.mode is CoordMode.SELF_SIMILAR_Z:
        return g.z, math.sqrt(tb)
    return g.z / math.sqrt(tb), 1.0


def g_from_u(u: Field, t: float | None = None) -> Field:
    """Good unknown from the velocity perturbation: d_y u + (y/(2<t>)) u."""
    if t is not None and t != u.t:
        u = Field(u.values, u.grid, t)
    u.check_finite()
    scale = np.max(np.abs(u.values))
    if scale > 0 and np.max(np.abs(u.values[:, 0])) > 1e-10 * scale:
        raise ValueError("u violates the boundary row u(x,0)=0")
    z, _ = _z_and_scale(u)
    tb = u.t + 1.0
    du = dy_field(u)
    coef = z / (2.0 * math.sqrt(tb))          # y/(2<t>) in the node coordinate
    return Field(du.values + u.values * coef[None, :], u.grid, u.t)


def recover_u(g: Field, t: float | None = None) -> Field:
    """Operator U: stable cumulative weighted integral along the normal."""
    if t is not None and t != g.t:
        g = Field(g.values, g.grid, t)
    g.check_finite()
    z, scale = _z_and_scale(g)
    vals = g.values
    nz = g.grid.nz
    u = np.zeros_like(vals)
    # y-integral in node coordinate: dy = scale * dz; kernel exp((z_j^2-z_i^2)/4)
    # via the recurrence I_i = E_i * I_{i-1} + trapezoid(i-1, i), E_i <= 1.
    zsq = z ** 2 / 4.0
    for i in range(1, nz):
        e = math.exp(zsq[i - 1] - zsq[i])
        h = (z[i] - z[i - 1]) * scale
        u[:, i] = e * u[:, i - 1] + 0.5 * h * (e * vals[:, i - 1] + vals[:, i])
    return Field(u, g.grid, g.t)


def recover_v(g: Field, t: float | None = None) -> Field:
    """Operator V: v = -int_0^y d_x u; d_x taken spectrally first."""
    if t is not None and t != g.t:
        g = Field(g.values, g.grid, t)
    u_x = dx_spectral(recover_u(g))
    z, scale = _z_and_scale(g)
    w = np.zeros_like(u_x.values)
    vals = u_x.values
    for i in range(1, len(z)):
        h = (z[i] - z[i - 1]) * scale
        w[:, i] = w[:, i - 1] + 0.5 * h * (vals[:, i - 1] + vals[:, i])
    return Field(-w, g.grid, g.t)


def omega_from_u(u: Field) -> Field:
    """Perturbation vorticity d_y u (diagnostic, derived on demand)."""
    return dy_field(u)


def state_from_g(g: Field) -> StateBundle:
    u = recover_u(g)
    v = recover_v(g)
    return StateBundle(g=g, u=u, v=v, t=g.t)

"""Tangentially-analytic norm ladder at radius tau and weight alpha.

Every entry has the shape  ||theta_alpha d_x^m (.)||_{L^2} * tau^m * M_m  with
M_m = sqrt(m+1)/m!.  The x-derivatives are spectral, so Parseval converts the
ladder into weighted sums over wavenumbers: no inverse transforms are needed.
tau^m M_m and the k^(2m) sums are evaluated in log space (factorial decay
against geometric growth is the classic catastrophic-cancellation pair).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field

import numpy as np
from scipy.special import gammaln

from .errors import LadderTruncationError
from .grid import Field, Grid, theta_sq_exponent

M_MAX_HARD = 64
TAIL_TOL = 1e-3


def factor_Mm(m: int) -> float:
    """M_m = sqrt(m+1)/m!, in log space beyond m=20."""
    if m < 0:
        raise ValueError("m must be nonnegative")
    if m > M_MAX_HARD:
        raise ValueError(f"m exceeds the ladder hard cap {M_MAX_HARD}")
    if m <= 20:
        return math.sqrt(m + 1) / math.factorial(m)
    return math.exp(0.5 * math.log(m + 1) - gammaln(m + 1))


def _log_tau_Mm(m: np.ndarray, tau: float) -> np.ndarray:
    return m * math.log(tau) + 0.5 * np.log(m + 1.0) - gammaln(m + 1.0)


@dataclass(eq=False)
class NormProfile:
    m_max: int
    tau: float
    alpha: float
    t: float
    X: np.ndarray
    D: np.ndarray
    Z: np.ndarray
    Y: np.ndarray
    B: np.ndarray
    tildeD: np.ndarray
    tildeZ: np.ndarray
    tildeB: np.ndarray
    tail_ratio: float = 0.0
    sums: dict = dc_field(default_factory=dict)

    @property
    def X_sum(self) -> float:
        return self.sums["X"]

    @property
    def B_sum(self) -> float:
        return self.sums["B"]


def _spectral_power(grid: Grid, vals: np.ndarray, w_col: np.ndarray) -> tuple:
    """Per-wavenumber weighted power S_k = sum_z W_z |fft(vals)_{k,z}|^2.

    Returns (kappa, S) with kappa the physical wavenumbers of the retained
    (dealiased) rfft modes, S including the rfft multiplicity factors.
    """
    fh = np.fft.rfft(vals, axis=0)
    fh[~grid.dealias, :] = 0.0
    mult = np.full(grid.nx // 2 + 1, 2.0)
    mult[0] = 1.0
    if grid.nx % 2 == 0:
        mult[-1] = 1.0
    s = mult * ((np.abs(fh) ** 2) @ w_col)
    kappa = 2.0 * math.pi / grid.lx * grid.kx
    return kappa, s * (grid.lx / grid.nx ** 2)


def _ladder_from_power(kappa: np.ndarray, s: np.ndarray, tau: float,
                       m_max: int) -> np.ndarray:
    """raw_m * tau^m * M_m for m = 0..m_max, raw_m^2 = sum_k kappa^(2m) S_k."""
    keep = s > 0.0
    out = np.zeros(m_max + 1)
    if not np.any(keep):
        return out
    kap = kappa[keep]
    sk = s[keep]
    ktop = float(kap.max())
    m = np.arange(m_max + 1, dtype=float)
    if ktop == 0.0:
        # only the x-mean survives: derivatives vanish for m >= 1
        out[0] = math.sqrt(float(sk.sum())) * math.exp(_log_tau_Mm(m[:1], tau)[0])
        return out
    r = kap / ktop
    with np.errstate(divide="ignore"):
        # sum_k r^(2m) S_k, scaled so the log stays finite for any m
        pw = r[None, :] ** (2.0 * m[:, None])
    ssum = pw @ sk
    log_raw = m * math.log(ktop) + 0.5 * np.log(ssum)
    return np.exp(log_raw + _log_tau_Mm(m, tau))


def seminorm_ladder(g: Field, tau: float, alpha: float, m_max: int = 20,
                    check_tail: bool = True) -> NormProfile:
    """Full ladder X/D/Z/Y/B + tilde variants of a field at radius tau."""
    if tau <= 0:
        raise ValueError("tau must be positive")
    if not 0 <= m_max <= M_MAX_HARD:
        raise ValueError(f"m_max must lie in [0, {M_MAX_HARD}]")
    g.check_finite()
    grid = g.grid
    tb = g.t + 1.0

    w_col = grid.trapz_w * np.exp(theta_sq_exponent(grid, alpha, g.t))
    w_col = w_col * grid.metric_dy(g.t)

    z = grid.z_of(g.t)
    dg = g.values @ grid.d1.T
    if grid.metric_dy(g.t) != 1.0:
        dg = dg / math.sqrt(tb)

    kap, s_x = _spectral_power(grid, g.values, w_col)
    _, s_d = _spectral_power(grid, dg, w_col)
    _, s_z = _spectral_power(grid, g.values * z[None, :], w_col)

    X = _ladder_from_power(kap, s_x, tau, m_max)
    D = _ladder_from_power(kap, s_d, tau, m_max)
    Z = _ladder_from_power(kap, s_z, tau, m_max)

    m = np.arange(m_max + 1, dtype=float)
    Y = X * m / tau
    B = tb ** 0.25 * (X + Z) + tb ** 0.75 * D
    with np.errstate(divide="ignore", invalid="ignore"):
        tildeD = np.where(X > 0, D ** 2 / np.where(X > 0, X, 1.0), 0.0)
        tildeZ = np.where(X > 0, Z ** 2 / np.where(X > 0, X, 1.0), 0.0)
    tildeB = tb ** 0.25 * X + tb ** 0.25 * tildeZ + tb ** 1.25 * tildeD

    sums = {
        "X": float(X.sum()), "D": float(D.sum()), "Z": float(Z.sum()),
        "Y": float(Y.sum()), "B": float(B.sum()),
        "tildeD": float(tildeD.sum()), "tildeZ": float(tildeZ.sum()),
        "tildeB": float(tildeB.sum()),
    }
    head = sums["X"] + sums["D"] + sums["Z"]
    tail = float(X[-1] + D[-1] + Z[-1]) if m_max >= 1 else 0.0
    tail_ratio = tail / head if head > 0 else 0.0

    if check_tail and tail_ratio > TAIL_TOL:
        raise LadderTruncationError(
            f"ladder-truncation: tail_ratio {tail_ratio:.3e} > {TAIL_TOL:g} at "
            f"tau={tau:g}; increase m_max or the data is unresolved at this radius"
        )

    return NormProfile(
        m_max=m_max, tau=tau, alpha=alpha, t=g.t,
        X=X, D=D, Z=Z, Y=Y, B=B,
        tildeD=tildeD, tildeZ=tildeZ, tildeB=tildeB,
        tail_ratio=tail_ratio, sums=sums,
    )


def check_B_tildeB(profile: NormProfile, t: float | None = None) -> float:
    """Margin of ||g||_B <= 2 <t>^{1/8} ||g||_X^{1/2} ||g||_tildeB^{1/2}."""
    tb = (profile.t if t is None else t) + 1.0
    rhs = 2.0 * tb ** 0.125 * math.sqrt(profile.sums["X"] * profile.sums["tildeB"])
    return rhs - profile.sums["B"]

"""Tangential analyticity radius: the ODE d/dt tau^{3/2} = -3 C0 ||g||_B,
its closed-form lower bound, and the lifespan formulas.

The ODE is advanced in the tau^{3/2} variable, where it is linear in the
forcing: exact for piecewise-constant B, no fractional-power stiffness near
collapse.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

from .errors import RadiusCollapseError, RegimeError


@dataclass
class RadiusState:
    tau: float
    tau0: float
    c0: float = 1.0
    c2: float = 6.0            # composed as 6*C0*C1 by calibrate()
    epsilon: float = 0.1
    strict: bool = False
    history: list = field(default_factory=list)   # (t, tau, B_norm) triples

    def __post_init__(self):
        if self.tau <= 0 or self.tau0 <= 0:
            raise ValueError("radii must be positive")
        if not (0 < self.epsilon < 1):
            raise ValueError("epsilon must lie in (0,1)")
        if self.strict:
            check_regime(self.epsilon, self.tau0, self.c2)

    @property
    def delta(self) -> float:
        return self.epsilon * math.log(1.0 / self.epsilon)


def check_regime(epsilon: float, tau0: float, c_star: float) -> None:
    """Strict-mode window: C*/log(1/eps) <= tau0^{3/2} <= 1/(C* eps^3),
    eps <= 1/200 and delta = eps log(1/eps) in (eps, 1/10)."""
    if epsilon > 1.0 / 200.0:
        raise RegimeError("strict regime requires epsilon <= 1/200")
    delta = epsilon * math.log(1.0 / epsilon)
    if not (epsilon < delta < 0.1):
        raise RegimeError("strict regime requires delta in (epsilon, 1/10)")
    lo = c_star / math.log(1.0 / epsilon)
    hi = 1.0 / (c_star * epsilon ** 3)
    if not (lo <= tau0 ** 1.5 <= hi):
        raise RegimeError(
            f"tau0^(3/2)={tau0 ** 1.5:.4g} outside the window [{lo:.4g}, {hi:.4g}]"
        )


def step_tau(state: RadiusState, B_norm: float, dt: float,
             t: float | None = None) -> RadiusState:
    """One explicit-Euler step of tau^{3/2}; tau never increases."""
    if dt <= 0:
        raise ValueError("dt must be positive")
    if B_norm < 0:
        raise ValueError("B_norm must be nonnegative")
    cube = state.tau ** 1.5 - 3.0 * state.c0 * B_norm * dt
    if cube <= 0:
        raise RadiusCollapseError(
            "radius-collapse: tau^(3/2) driven to zero; the run left the "
            "small-data regime"
        )
    tau_new = cube ** (2.0 / 3.0)
    hist = state.history
    if t is not None:
        hist = hist + [(t, tau_new, B_norm)]
    return replace(state, tau=tau_new, history=hist)


def tau_lower_bound(t: float, state: RadiusState) -> float:
    """Closed-form floor (tau0^{3/2} - eps*C2*<t>^delta / (2 delta))^{2/3};
    returns 0 past the guaranteed window."""
    delta = state.delta
    arg = state.tau0 ** 1.5 - state.epsilon * state.c2 * (t + 1.0) ** delta / (2.0 * delta)
    if arg <= 0:
        return 0.0
    return arg ** (2.0 / 3.0)


def lifespan_T_eps(state: RadiusState) -> float:
    """T_eps = (delta tau0^{3/2} / (eps C2))^{1/delta} - 1."""
    if state.strict:
        check_regime(state.epsilon, state.tau0, state.c2)
    delta = state.delta
    base = delta * state.tau0 ** 1.5 / (state.epsilon * state.c2)
    if base < 1.0:
        return 0.0
    return base ** (1.0 / delta) - 1.0


def holder_modulus(history) -> float:
    """max |tau(t1)-tau(t2)| / |t1-t2|^{1/2} over recorded pairs."""
    best = 0.0
    pts = [(t, tau) for (t, tau, _) in history]
    for i in range(len(pts)):
        t1, tau1 = pts[i]
        for j in range(i + 1, len(pts)):
            t2, tau2 = pts[j]
            if t2 > t1:
                best = max(best, abs(tau1 - tau2) / math.sqrt(t2 - t1))
    return best

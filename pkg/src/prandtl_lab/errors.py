"""Exception hierarchy shared across the package.

Exit-code mapping (see cli): ConfigError -> 2, numerical aborts -> 3,
RegimeError -> 4.
"""


class PrandtlLabError(Exception):
    pass


class ConfigError(PrandtlLabError):
    """Bad configuration: unknown key, type mismatch, invalid range."""


class RegimeError(PrandtlLabError):
    """Strict-mode parameter-regime violation (epsilon/tau0 window)."""


class NumericalAbort(PrandtlLabError):
    """A run left the valid numerical regime (NaN, CFL exhaustion)."""


class RadiusCollapseError(NumericalAbort):
    """tau^(3/2) was driven to zero or below: left the small-data regime."""


class LadderTruncationError(NumericalAbort):
    """Seminorm ladder tail not converged at the requested radius."""

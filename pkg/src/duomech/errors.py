"""Exception types shared across the package."""


class ConfigError(ValueError):
    """Invalid parameter set, config file entry, or command-line request."""


class StabilityError(RuntimeError):
    """Drift matrix is not strictly stable where a steady state is required."""


class PhysicalityError(ValueError):
    """Covariance matrix (or derived quantity) violates the uncertainty bound."""


class UnsupportedBranchError(ValueError):
    """Input falls outside the covariance-matrix branch this formula covers."""


class BracketError(ValueError):
    """Root bracket does not enclose a sign change of the target indicator."""

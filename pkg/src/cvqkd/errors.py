"""Exception types raised across the package."""


class DomainError(ValueError):
    """An input lies outside the domain of a formula."""


class NonPhysicalStateError(DomainError):
    """A covariance matrix does not describe a physical Gaussian state."""


class SingularScenarioError(DomainError):
    """A trusted-noise scenario hits an unphysical limit (e.g. T_ch = 1 with channel noise)."""


class EstimationError(ValueError):
    """Parameter estimation cannot proceed on the given sample."""


class InfeasibleError(ValueError):
    """A protocol configuration cannot certify a key (abort condition)."""


class ConfigError(ValueError):
    """Malformed or inconsistent run configuration."""

"""Exception types shared across the package."""


class DomainError(ValueError):
    """Input lies outside the mathematical domain of an operation."""


class ConfigurationError(ValueError):
    """Parameters violate the constraints required for a construction."""


class NumericalError(RuntimeError):
    """A numerical procedure failed to reach its requested accuracy."""


class IndeterminateError(RuntimeError):
    """A query is too close to a discretized object to be decided reliably."""


class VerificationError(RuntimeError):
    """An analytic prediction and an independent numerical check disagree."""

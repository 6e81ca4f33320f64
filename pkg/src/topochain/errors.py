"""Exception types shared across the package."""


class TopochainError(Exception):
    """Base class for all package-specific errors."""


class InvalidDimensionError(TopochainError, ValueError):
    """Chain or matrix dimension outside the supported range."""


class InvalidParameterError(TopochainError, ValueError):
    """A scalar parameter violates its precondition."""


class PhaseDomainError(TopochainError, ValueError):
    """Operation requested outside the topological phase it is defined in."""


class NumericError(TopochainError, ValueError):
    """Non-finite input or a numerical routine that failed to converge."""


class IntegrationError(TopochainError, RuntimeError):
    """Time integration failed or drifted beyond tolerance."""


class SchemaError(TopochainError, ValueError):
    """Config text failed validation; ``violations`` lists every offence."""

    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))

"""Exception types shared across the package."""


class DomainError(ValueError):
    """An input lies outside the domain of an operation."""


class InvariantViolation(RuntimeError):
    """A mathematical invariant that should always hold was observed to fail."""


class ConfigError(ValueError):
    """A configuration file or parameter set is invalid."""


class RuleViolation(InvariantViolation):
    """A game move broke the rules (wrong radius or not nested)."""

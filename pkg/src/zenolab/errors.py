"""Exception types shared across the package."""


class DomainError(ValueError):
    """An input lies outside the domain of an operation."""


class OutOfRegimeError(ValueError):
    """An asymptotic formula is applied outside the regime where it holds."""


class NumericalConsistencyError(ArithmeticError):
    """A closed-form result drifted outside its admissible band."""


class ConfigError(ValueError):
    """Invalid or inconsistent run configuration."""

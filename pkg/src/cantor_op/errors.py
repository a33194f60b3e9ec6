"""Exception types shared across the package."""


class DomainError(ValueError):
    """An input lies outside the domain where an operation is defined."""


class PrecisionExhausted(ArithmeticError):
    """Working precision is too small for the requested computation."""


class ConfigError(ValueError):
    """A gamma specification or run configuration could not be parsed."""

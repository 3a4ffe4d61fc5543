"""Exception types shared across the package."""


class PreconditionError(ValueError):
    """An argument violates a documented precondition (CLI exit code 3)."""


class ConfigurationError(ValueError):
    """Invalid engine configuration, e.g. a zero segment length."""

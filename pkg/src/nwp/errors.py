"""Exception types shared across the package."""


class InvariantError(ValueError):
    """A value violates a structural invariant (grid size, physical constants, ...)."""


class ConfigError(ValueError):
    """A run configuration could not be parsed or contains unknown keys."""

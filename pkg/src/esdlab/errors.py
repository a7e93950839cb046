"""Error types shared across the package."""


class ValidationError(ValueError):
    """An input violates a physical or structural invariant."""


class DimensionError(ValueError):
    """Matrix or tensor dimensions do not match what an operation needs."""


class RegimeError(ValueError):
    """A coupling-regime-specific formula was called in the wrong regime."""


class ConfigError(ValueError):
    """Bad CLI flag, config-file key, or option combination."""

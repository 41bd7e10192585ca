"""Exception types shared across the toolkit."""


class InvalidPointError(ValueError):
    """A point violates a domain constraint (outside, on the boundary, or non-finite)."""


class UnsupportedModelError(ValueError):
    """An operation was asked to handle a map variant it deliberately rejects."""


class ConfigError(ValueError):
    """A CLI configuration file could not be parsed or validated."""

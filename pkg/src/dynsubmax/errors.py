"""Shared exception types."""


class UnknownElementError(ValueError):
    """An element outside the oracle's ground set was evaluated."""


class DuplicateElementError(ValueError):
    """Insert of an element that is already live."""


class MissingElementError(ValueError):
    """Delete of an element that is not live."""


class ConfigError(ValueError):
    """Invalid algorithm or experiment configuration."""


class InstanceTooLargeError(ValueError):
    """Exhaustive search refused: the instance exceeds the enumeration budget."""

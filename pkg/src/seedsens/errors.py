"""Exception types shared across the package."""


class SeedSensError(Exception):
    """Base class for errors raised by seedsens."""


class InputError(SeedSensError, ValueError):
    """Malformed or inconsistent user input (bad seed, model, alphabet...)."""


class ResourceLimitError(SeedSensError):
    """A configurable size cap would be exceeded."""


class InvariantError(SeedSensError, AssertionError):
    """An internal consistency check failed; indicates a bug."""

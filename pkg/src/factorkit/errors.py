"""Error types shared across the package."""


class FactorkitError(Exception):
    """Base class for errors raised by this package."""


class InvalidInputError(FactorkitError):
    """The request violates a documented precondition or invariant."""


class RegimeRefusedError(FactorkitError):
    """The inputs are well-formed but outside the supported regime
    (e.g. an exact engine's size ceiling, or a sampler's degree limit)."""

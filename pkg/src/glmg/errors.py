"""Exceptions shared across the package."""


class ValidationError(ValueError):
    """An input violates a documented precondition."""


class ResourceCapError(RuntimeError):
    """A computation would exceed a configured size cap (support points,
    Hilbert-space dimension, sector dimension)."""

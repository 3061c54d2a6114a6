"""Exception types shared across the package."""


class DomainError(ValueError):
    """A parameter lies outside the admissible domain (p endpoints, l > n, ...)."""


class DimensionError(ValueError):
    """A dense register would exceed the configured dimension cap."""

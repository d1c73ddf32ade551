"""Error types raised by the snowflake_groups library."""

from typing import Optional


class SnowflakeError(Exception):
    """Base class for all library errors."""


class ParameterError(SnowflakeError, ValueError):
    """Family constraint violation or an invalid character / CLI parameter."""


class WordParseError(SnowflakeError, ValueError):
    """Malformed word text or an unknown generator name."""


class MapDomainError(SnowflakeError, KeyError):
    """A generator map has no image for a letter being substituted."""

    def __init__(self, generator: str):
        super().__init__(generator)
        self.generator = generator

    def __str__(self) -> str:
        return f"generator map has no image for '{self.generator}'"


class ResourceLimitError(SnowflakeError, RuntimeError):
    """A resource cap (cosets, search states) was reached."""

    def __init__(self, resource: str, limit: int, used: int):
        super().__init__(f"{resource} limit {limit} exceeded (used {used})")
        self.resource = resource
        self.limit = limit
        self.used = used


class CosetLimitError(ResourceLimitError):
    def __init__(self, limit: int, used: int):
        super().__init__("coset", limit, used)


class NotFoundError(SnowflakeError, LookupError):
    """A search finished without a hit; ``best`` holds the closest candidate."""

    def __init__(self, message: str, best: Optional[tuple] = None):
        super().__init__(message)
        self.best = best

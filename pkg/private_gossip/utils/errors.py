"""
Error types for the private gossip simulator.

Every failure raised by the library derives from GossipError. None of these
subclass ValueError, so pydantic validators propagate them unchanged instead
of wrapping them in a ValidationError.
"""

from typing import Optional


class GossipError(Exception):
    """Base class for all simulator errors."""


class InvalidParameterError(GossipError):
    """A parameter is outside its documented range."""


class ConnectivityError(GossipError):
    """The graph is not connected."""

    def __init__(self, message: str, component_count: Optional[int] = None):
        super().__init__(message)
        self.component_count = component_count


class CapacityError(GossipError):
    """The dense eigensolver cannot handle the request."""


class DegenerateInputError(GossipError):
    """A quantity is undefined for the given input (zero denominator)."""


class SetupError(GossipError):
    """An experiment could not be prepared."""


class ConfigError(GossipError):
    """Malformed configuration file or CLI values."""


class OutputError(GossipError):
    """Writing a result file failed."""

    def __init__(self, message: str, path: Optional[str] = None):
        super().__init__(f"{message} ({path})" if path else message)
        self.path = path

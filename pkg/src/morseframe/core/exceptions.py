"""
Custom exceptions for the morseframe package.
"""
from typing import Optional


class MorseFrameError(Exception):
    """Base exception for all morseframe errors."""

    pass


class InputError(MorseFrameError):
    """Raised when an argument violates an operation's contract."""

    pass


class PreconditionError(InputError):
    """Raised when a point is required to lie in a polytope but does not."""

    pass


class RefusalError(InputError):
    """Raised when an exhaustive computation would be too large."""

    pass


class ConfigurationError(MorseFrameError):
    """Raised when configuration is invalid."""

    pass


class AnalysisError(MorseFrameError):
    """Raised when the numerical surface analysis cannot be completed."""

    pass


class SceneNotMorseError(AnalysisError):
    """Raised when a scene has degenerate or unresolvable critical points."""

    pass


class TracingIncompleteError(AnalysisError):
    """Raised when a separatrix is not captured by any critical point."""

    def __init__(
        self, message: str, saddle: Optional[int] = None, direction: str = ""
    ) -> None:
        super().__init__(message)
        self.saddle = saddle
        self.direction = direction


class DisconnectedGraphError(ConfigurationError, AnalysisError):
    """Raised when saddles are disconnected in the pruned distance graph."""

    pass


class ReportIOError(MorseFrameError):
    """Raised when reading or writing report artifacts fails."""

    pass

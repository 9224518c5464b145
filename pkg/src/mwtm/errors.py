"""Exception types shared across the package."""

from __future__ import annotations


class MwtmError(Exception):
    """Base class for all package-specific errors."""


class RuleFormatError(MwtmError, ValueError):
    """A rule definition (text or structural) is malformed.

    ``position`` is a character offset into the offending text when the
    error came from the text parser, else None.
    """

    def __init__(self, message: str, position: int | None = None):
        if position is not None:
            message = f"position {position}: {message}"
        super().__init__(message)
        self.position = position


class InvalidConfigurationError(MwtmError, ValueError):
    """A configuration is out of range for the machine's (s, k)."""


class ResourceLimitError(MwtmError, RuntimeError):
    """A configured cap (node count, state space, graph size) was exceeded.

    Carries the cap that was hit and, when meaningful, the depth reached.
    """

    def __init__(self, message: str, cap: int, depth: int | None = None):
        detail = f"{message} (cap={cap}"
        if depth is not None:
            detail += f", depth={depth}"
        detail += ")"
        super().__init__(detail)
        self.cap = cap
        self.depth = depth


class DepthInsufficientError(MwtmError, ValueError):
    """A query needs more depth than the graph was built to."""


class NonComposablePathError(MwtmError, ValueError):
    """An event sequence is not a root-anchored composable path."""

"""Exception types shared across the package."""

from __future__ import annotations


class KmsGraphError(Exception):
    """Base class for all package-specific errors."""


class GraphParseError(KmsGraphError):
    """Raised when an edge-list or JSON graph document is malformed."""

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class UnknownVertexError(KmsGraphError):
    """Raised when an operation names a vertex the graph does not declare."""


class PathLimitError(KmsGraphError):
    """Raised when explicit path enumeration would exceed the configured cap."""


class ConvergenceError(KmsGraphError):
    """Raised when an iterative estimate fails to converge.

    Carries the best bracketing interval obtained so far.
    """

    def __init__(self, message: str, bracket: tuple[float, float] | None = None):
        super().__init__(message)
        self.bracket = bracket


class AtCriticalityError(KmsGraphError):
    """Raised when an inverse temperature sits inside the near-tie band of a
    critical value, where convergence cannot be decided numerically.

    ``components`` names the strongly connected components whose critical
    inverse temperature is being straddled.
    """

    def __init__(self, message: str, components: tuple[tuple[str, ...], ...] = ()):
        super().__init__(message)
        self.components = components


class NearTieError(KmsGraphError):
    """Raised when two spectral radii agree within tolerance in a place where
    the computation requires a strict inequality."""


class SpectralDataError(KmsGraphError):
    """Raised when a reconstruction table is inconsistent or out of range."""


class NearTieWarning(UserWarning):
    """Emitted when a radius comparison falls inside the tolerance band but the
    result does not depend on resolving the tie."""

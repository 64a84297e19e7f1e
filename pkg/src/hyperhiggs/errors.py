"""Failure types shared across the package."""

from __future__ import annotations

__all__ = [
    "OutsideConeError",
    "StalenessError",
    "NonFiniteSampleError",
    "SolverConvergenceError",
    "IndefiniteOperatorError",
    "EvolutionAbort",
    "ConfigError",
]


class OutsideConeError(ValueError):
    """Point does not lie in the interior light cone r < t - 1."""


class StalenessError(RuntimeError):
    """Buffered time levels do not cover the requested range."""

    def __init__(self, message, required=None, available=None):
        super().__init__(message)
        self.required = required
        self.available = available


class NonFiniteSampleError(ValueError):
    """A grid sample is NaN/Inf; carries the offending flat index."""

    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index


class SolverConvergenceError(RuntimeError):
    """Elliptic solve failed to reach tolerance; carries the residual history."""

    def __init__(self, message, residuals=None):
        super().__init__(message)
        self.residuals = list(residuals) if residuals is not None else []


class IndefiniteOperatorError(ValueError):
    """Helmholtz operator is not uniformly negative definite."""


class EvolutionAbort(RuntimeError):
    """Evolution stopped: NaN/Inf detected or support reached the boundary."""

    def __init__(self, message, t=None, step=None):
        super().__init__(message)
        self.t = t
        self.step = step


class ConfigError(ValueError):
    """Invalid run configuration; carries a line number when parsed from text."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line

from __future__ import annotations


class PTMomentError(Exception):
    """Base class for every error raised by the package."""


class ValidationError(PTMomentError, ValueError):
    """Input matrix or vector violates a stated invariant."""


class DomainError(PTMomentError, ValueError):
    """Parameter outside the domain of an operation."""


class InconsistentMomentsError(PTMomentError, ValueError):
    """Moment vector cannot come from any two-qubit state."""


class InternalConsistencyError(PTMomentError, RuntimeError):
    """Two computations that must agree did not."""


class ResolutionError(PTMomentError, ValueError):
    """Brute-force grid too coarse to find a matching point."""

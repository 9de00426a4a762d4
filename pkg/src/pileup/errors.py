"""Exception types shared across the toolkit."""

from __future__ import annotations


class PileupError(Exception):
    """Base class for all toolkit-specific failures."""


class SingularEnergyError(PileupError):
    """A configuration with coincident walls makes the pair energy infinite."""


class ConvergenceError(PileupError):
    """Newton failed to reach the requested gradient tolerance.

    Carries the last iterate and its residual so callers can inspect or
    restart the solve.
    """

    def __init__(self, message: str, iterate=None, residual: float | None = None):
        super().__init__(message)
        self.iterate = iterate
        self.residual = residual


class StructuralError(PileupError):
    """Damping could not restore the wall ordering during a Newton step."""


class AdmissibilityError(PileupError):
    """A density violates the constraints of the requested admissible class."""

    def __init__(self, message: str, violations=None):
        super().__init__(message)
        self.violations = list(violations) if violations else []


class SolverError(PileupError):
    """A linear solve produced an unusable solution (ill-conditioning or
    residuals above the backward-error bound)."""


class GridError(PileupError):
    """The collocation-grid targets cannot be met by a geometric grid."""

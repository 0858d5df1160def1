"""Exception types shared across the package.

Degeneracy errors (subclasses of DegeneracyError) mean the input violates
the distinct-events / general-position assumptions and the run must abort;
they map to a dedicated process exit code in the CLI.
"""


class AlphaMedusaError(Exception):
    """Base class for all package errors."""


class ZeroPolynomial(AlphaMedusaError):
    """An identically zero polynomial where a nonzero one is required."""


class InvalidInterval(AlphaMedusaError):
    """Interval with lo >= hi passed to an isolation routine."""


class DegeneracyError(AlphaMedusaError):
    """Input violates a general-position assumption; the run aborts."""


class DegenerateSimplex(DegeneracyError):
    """Circumsphere requested for an affinely dependent vertex set."""


class DuplicatePoint(DegeneracyError):
    """Two vertices occupy the same position at the same time."""


class DegenerateInput(DegeneracyError):
    """Point set degenerate for triangulation (cospherical conflict walk,
    all points coplanar, or fewer than four points)."""


class NoSuchVertex(AlphaMedusaError):
    """Deletion of a vertex id that is not part of the triangulation."""


class MedusaInvariantError(AlphaMedusaError):
    """Active/output bookkeeping of the space-time complex went
    inconsistent (double open, close of an inactive cell, overlapping
    copies); always indicates a bug, never bad input."""


class UnflippableEvent(DegeneracyError):
    """A co-spherical facet event whose surroundings admit no bistellar flip."""


class SimultaneousEvents(DegeneracyError):
    """Two events coincide in time (distinct-events assumption violated)."""


class CoincidentTrajectories(DegeneracyError):
    """Two trajectories share an exact position at some instant."""


class FormatError(AlphaMedusaError):
    """Malformed trajectory file; carries a line number when known."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)

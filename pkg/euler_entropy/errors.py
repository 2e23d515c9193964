"""Exceptions raised by euler-entropy.

Every error derives from EulerEntropyError. Errors caused by bad input derive from
ValidationError and errors caused by running out of a configured budget derive from
BudgetExceededError; the command-line tool maps these to different exit codes.
"""

from __future__ import annotations

from typing import Any


class EulerEntropyError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(EulerEntropyError):
    """The input to an operation was invalid."""


class BudgetExceededError(EulerEntropyError):
    """A configured cap or budget was exhausted before an operation completed."""


class EdgeListParseError(ValidationError):
    """A line of an edge list could not be parsed."""

    def __init__(self, line_no: int, line: str, reason: str) -> None:
        """Create a new EdgeListParseError.

        Args:
            line_no: The (1-based) number of the offending line
            line: The contents of the offending line
            reason: Why the line is invalid
        """
        super().__init__(f"Line {line_no} ({line!r}): {reason}")
        self.line_no = line_no
        self.line = line


class LoopEdgeError(ValidationError):
    """An edge joins a vertex to itself."""

    def __init__(self, vertex: int) -> None:
        """Create a new LoopEdgeError."""
        super().__init__(f"Loop edge at vertex {vertex} is not allowed")
        self.vertex = vertex


class VertexRangeError(ValidationError):
    """A vertex index lies outside [0, n)."""

    def __init__(self, vertex: int, n: int) -> None:
        """Create a new VertexRangeError."""
        super().__init__(f"Vertex {vertex} is out of range for n={n}")
        self.vertex = vertex
        self.n = n


class GeneratorSpecError(ValidationError):
    """A generator specification is malformed or has invalid parameters."""


class OddDegreeError(ValidationError):
    """A vertex has odd degree, so the graph has no Eulerian orientation."""

    def __init__(self, vertex: int, degree: int) -> None:
        """Create a new OddDegreeError."""
        super().__init__(f"Vertex {vertex} has odd degree {degree}")
        self.vertex = vertex
        self.degree = degree


class IrregularGraphError(ValidationError):
    """The graph is not regular but the operation requires it."""

    def __init__(self, degrees: frozenset[int]) -> None:
        """Create a new IrregularGraphError."""
        super().__init__(f"Graph is not regular (degrees {sorted(degrees)})")
        self.degrees = degrees


class InvalidPartitionError(ValidationError):
    """A pairing is not a valid Eulerian partition of the graph."""


class InvalidSwitchingError(ValidationError):
    """A switching choice does not match the partition it is applied to."""


class ConditionViolationError(ValidationError):
    """The sets passed to the switching bound violate one of its conditions."""

    def __init__(self, vertex: Any, reason: str) -> None:
        """Create a new ConditionViolationError.

        Args:
            vertex: The offending vertex of the switching graph
            reason: Which condition is violated
        """
        super().__init__(f"Vertex {vertex}: {reason}")
        self.vertex = vertex


class RunConfigError(ValidationError):
    """A run configuration is invalid or contradictory."""


class RejectionBudgetExceeded(BudgetExceededError):
    """No simple graph was produced within the allowed number of attempts."""

    def __init__(self, attempts: int) -> None:
        """Create a new RejectionBudgetExceeded."""
        super().__init__(
            f"No simple pairing found in {attempts} attempts; retry with a new seed"
        )
        self.attempts = attempts


class NonConvergenceError(BudgetExceededError):
    """The eigensolver did not converge within the sweep cap."""

    def __init__(self, sweeps: int, off_norm: float) -> None:
        """Create a new NonConvergenceError."""
        super().__init__(
            f"Jacobi iteration did not converge after {sweeps} sweeps "
            f"(off-diagonal norm {off_norm:.3e})"
        )
        self.sweeps = sweeps
        self.off_norm = off_norm


class EdgeCapExceeded(BudgetExceededError):
    """The graph has too many edges for exact orientation counting."""

    def __init__(self, m: int, cap: int) -> None:
        """Create a new EdgeCapExceeded."""
        super().__init__(f"Graph has {m} edges; the exact counting cap is {cap}")
        self.m = m
        self.cap = cap


class EnumerationCapExceeded(BudgetExceededError):
    """There are too many partitions to enumerate exhaustively."""

    def __init__(self, count: int, cap: int) -> None:
        """Create a new EnumerationCapExceeded."""
        super().__init__(f"{count} partitions exceed the enumeration cap of {cap}")
        self.count = count
        self.cap = cap


class StateBudgetExceeded(BudgetExceededError):
    """A search visited more states than its budget allows."""

    def __init__(self, name: str, limit: int) -> None:
        """Create a new StateBudgetExceeded."""
        super().__init__(f"Search '{name}' exceeded its budget of {limit} states")
        self.name = name
        self.limit = limit


class TrailBudgetExceeded(StateBudgetExceeded):
    """The closed-trail search exceeded its budget.

    The partial table is attached for diagnostics but must not be treated as exact.
    """

    partial: Any = None


class PathBudgetExceeded(StateBudgetExceeded):
    """The switching path search exceeded its budget."""

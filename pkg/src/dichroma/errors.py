"""Exception types shared across the package."""

from __future__ import annotations


class DichromaError(Exception):
    """Base class for all errors raised by dichroma."""


class BudgetExceeded(DichromaError):
    """An exact search ran out of its node budget.

    ``bound`` carries the best bound known when the search stopped (its
    meaning is documented by the raising function) and ``witness`` an
    object certifying it, if any.
    """

    def __init__(self, message: str, bound=None, witness=None):
        super().__init__(message)
        self.bound = bound
        self.witness = witness


class NotDegenerate(DichromaError):
    """Peeling stalled: the remaining vertices induce a non-k-degenerate subdigraph."""

    def __init__(self, k: int, vertices):
        self.k = k
        self.vertices = sorted(vertices)
        super().__init__(
            f"digraph is not {k}-degenerate; peeling stalled on {self.vertices}"
        )


class ListTooSmall(DichromaError):
    def __init__(self, vertex: int, size: int, needed: int):
        self.vertex = vertex
        super().__init__(f"list of vertex {vertex} has {size} colors, needs {needed}")


class ForbiddenSubgraph(DichromaError, ValueError):
    """The input contains a subdigraph excluded by the operation's precondition."""

    def __init__(self, name: str, vertices):
        self.vertices = tuple(vertices)
        super().__init__(f"input contains a {name} on vertices {self.vertices}")


class RejectionFailed(DichromaError):
    def __init__(self, tries: int, accepted: int = 0):
        self.tries = tries
        self.rate = accepted / tries if tries else 0.0
        super().__init__(
            f"no acceptable sample in {tries} tries (empirical acceptance {self.rate:.3g})"
        )

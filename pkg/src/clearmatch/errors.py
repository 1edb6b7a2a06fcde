"""Exception types shared across the package.

Input-validation errors (bad indices, malformed structures, mismatched
layouts) subclass ValueError; numerical/pipeline failures subclass
RuntimeError.  The CLI maps the former to exit code 2 and the latter to
exit code 3.
"""

from __future__ import annotations


class IndexOutOfRange(ValueError):
    """A view or item index falls outside the declared layout."""


class SameViewEdge(ValueError):
    """An association pair joins two items of the same view."""


class LayoutMismatch(ValueError):
    """Two objects that must share a view layout do not."""


class ShapeError(ValueError):
    """A matrix violates a structural precondition (e.g. rows > cols)."""


class ConvergenceFailure(RuntimeError):
    """The eigensolver exceeded its iteration budget.

    ``component`` identifies the connected component being decomposed
    when the failure surfaced, or None for a direct solver call.
    """

    def __init__(self, message: str, component: int | None = None):
        super().__init__(message)
        self.component = component


class InsufficientNonZeroRows(RuntimeError):
    """Fewer usable embedding rows than pivots requested."""

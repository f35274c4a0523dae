"""Exception hierarchy for the deltagon package."""


class DeltagonError(Exception):
    """Base class for all errors raised by this package."""


class DimensionMismatch(DeltagonError):
    """Operands live in ambient spaces of different dimensions."""


class NonExactDivision(DeltagonError):
    """Polynomial division left a nonzero remainder.

    Inside the closed Abel formulas this signals a violated precondition
    (or a bug), never an expected runtime condition.
    """


class InsufficientOrder(DeltagonError):
    """A coefficient beyond the declared truncation order was requested."""


class NotAdmissible(DeltagonError):
    """A series system fails the admissibility test."""


class NonzeroConstantTerm(NotAdmissible):
    """A series that must vanish at the origin has a constant term."""

    def __init__(self, message="nonzero constant term", component=None):
        super().__init__(message)
        self.component = component


class SingularJacobian(NotAdmissible):
    """The linear part of a series system is a singular matrix."""


class ZeroConstantTerm(DeltagonError):
    """A series that must be invertible vanishes at the origin."""


class NotInvertible(DeltagonError):
    """The operator's indicator has zero constant term, so no inverse exists."""


class MissingNode(DeltagonError):
    """The interpolation grid has no node at the requested index."""

    def __init__(self, index):
        super().__init__(f"no node defined at index {index}")
        self.index = index


class MissingValue(DeltagonError):
    """An interpolation problem lacks a target value at some index."""

    def __init__(self, index):
        super().__init__(f"no interpolation value given at index {index}")
        self.index = index


class NotInSpan(DeltagonError):
    """The polynomial does not lie in the span selected by the lower set."""


class BadParams(DeltagonError):
    """Malformed preset parameters or job specification."""

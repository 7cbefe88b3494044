"""Exception hierarchy for case construction and analysis.

Every domain failure derives from :class:`CaseConfError` so callers (and the
CLI, which maps them to exit code 1) can distinguish bad input from bugs.
Structural errors carry the offending node id where one is known.
"""

from __future__ import annotations


class CaseConfError(Exception):
    """Base class for all domain errors raised by this package."""


class CaseStructureError(CaseConfError):
    """A case document violates the schema or a graph invariant."""

    def __init__(self, message: str, node: str | None = None):
        self.node = node
        if node is not None:
            message = f"{node}: {message}"
        super().__init__(message)


class DuplicateIdError(CaseStructureError):
    pass


class DanglingReferenceError(CaseStructureError):
    pass


class CycleError(CaseStructureError):
    pass


class TopClaimError(CaseStructureError):
    """Zero or several top-level claims, or a top_claim reference mismatch."""


class BlockArityError(CaseStructureError):
    """A block has the wrong number or kind of children, warrant, or parent."""


class InvalidNodeIdError(CaseStructureError):
    pass


class UnknownNodeError(CaseConfError):
    """A lookup referenced a node that does not exist in the graph."""


class DefeaterStateError(CaseConfError):
    """Attempt to resolve a defeater that is already sustained or refuted."""


class MissingAssignmentError(CaseConfError):
    """Propagation needs a leaf posterior or warrant confidence that is absent."""


class InvalidAssignmentError(CaseConfError):
    """An assigned probability is outside [0, 1]."""


class MissingWarrantError(CaseConfError):
    """Propagation refused: deductive blocks lack warrants and the caller did
    not pass allow_missing_warrant."""


class UndefinedMeasureError(CaseConfError):
    """A weight-of-evidence measure was evaluated outside its domain."""


class ImpactUnavailableError(CaseConfError):
    """A defeater carries no counterfactual refuted posterior, so its
    refutation impact cannot be computed."""


class SessionFailedError(CaseConfError):
    """A Delphi round ended with every expert dropped."""

    def __init__(self, message: str, partial=None):
        self.partial = partial
        super().__init__(message)


class ScenariosFileError(CaseConfError):
    """A benchmark scenarios file is missing, empty, or entirely malformed."""

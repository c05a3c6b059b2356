"""Exception hierarchy for powerspace.

Every error carries a stable snake-case ``code`` so the CLI can emit a
JSON error body without string matching on messages.
"""

from __future__ import annotations

from typing import Any


class PowerspaceError(Exception):
    """Root of all library errors."""

    code = "powerspace_error"

    def __init__(self, message: str, **details: Any) -> None:
        super().__init__(message)
        self.message = message
        self.details = details

    def to_dict(self) -> dict[str, Any]:
        return {"error": self.code, "message": self.message, **self.details}


# ---------------------------------------------------------------------------
# Posets
# ---------------------------------------------------------------------------


class CycleError(PowerspaceError):
    """The order closure relates two distinct elements both ways."""

    code = "cycle_error"


class DuplicateElement(PowerspaceError):
    code = "duplicate_element"


class UnknownElement(PowerspaceError):
    code = "unknown_element"


class NotDirected(PowerspaceError):
    code = "not_directed"


class SizeLimitExceeded(PowerspaceError):
    """An enumeration would exceed its configured cap."""

    code = "size_limit_exceeded"


# ---------------------------------------------------------------------------
# Valuations
# ---------------------------------------------------------------------------


class NonPositiveCoefficient(PowerspaceError):
    code = "non_positive_coefficient"


class NegativeScalar(PowerspaceError):
    code = "negative_scalar"


class NotOpen(PowerspaceError):
    """The subset is not an upper set, so it is not open."""

    code = "not_open"


class SpaceMismatch(PowerspaceError):
    code = "space_mismatch"


# ---------------------------------------------------------------------------
# Relations and constructions
# ---------------------------------------------------------------------------


class PreconditionFailed(PowerspaceError):
    code = "precondition_failed"


class InternalError(PowerspaceError):
    """A constructed witness failed its own verification. Always a bug."""

    code = "internal_error"


class CarrierViolation(PowerspaceError):
    code = "carrier_violation"


class NonMonotoneMap(PowerspaceError):
    code = "non_monotone_map"


# ---------------------------------------------------------------------------
# Semantics
# ---------------------------------------------------------------------------


class ProgramSyntaxError(PowerspaceError):
    """Program text does not match the grammar. Carries line and column."""

    code = "syntax_error"

    def __init__(self, message: str, *, line: int, column: int) -> None:
        super().__init__(f"{message} (line {line}, column {column})", line=line, column=column)
        self.line = line
        self.column = column


class UnknownState(PowerspaceError):
    code = "unknown_state"


class NonMonotoneBinder(PowerspaceError):
    code = "non_monotone_binder"


class MissingBinderEntry(PowerspaceError):
    code = "missing_binder_entry"


# ---------------------------------------------------------------------------
# CLI / documents
# ---------------------------------------------------------------------------


class DocumentError(PowerspaceError):
    code = "document_error"


class UnknownSuite(PowerspaceError):
    code = "unknown_suite"

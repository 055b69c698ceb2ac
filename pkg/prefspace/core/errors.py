"""
prefspace/core/errors.py — Exception hierarchy shared by every module.

Each error carries a machine-readable ``code`` and a human ``message`` so the
CLI can emit the same ``{"code": ..., "message": ...}`` detail for every failure.
"""
from typing import Any, Dict


class PrefSpaceError(ValueError):
    """Base class: a failure with a stable code and a readable message."""

    code = "PREFSPACE_ERROR"

    def __init__(self, message: str, code: str | None = None) -> None:
        super().__init__(message)
        self.message = message
        if code is not None:
            self.code = code

    @property
    def detail(self) -> Dict[str, Any]:
        return {"code": self.code, "message": self.message}


class SizeError(PrefSpaceError):
    """A requested size is above the configured enumeration cap."""

    code = "SIZE_CAP_EXCEEDED"


class DomainError(PrefSpaceError):
    """An argument lies outside the domain of the operation."""

    code = "DOMAIN_ERROR"


class PreconditionError(PrefSpaceError):
    """A documented precondition of the operation does not hold."""

    code = "PRECONDITION_FAILED"


class ScopeError(PrefSpaceError):
    """The request falls outside the scope a claim is stated for."""

    code = "OUT_OF_SCOPE"


class DimensionError(PrefSpaceError):
    """Two objects live over ground sets of different sizes."""

    code = "DIMENSION_MISMATCH"


class UsageError(PrefSpaceError):
    """Invalid command-line usage or configuration file."""

    code = "USAGE_ERROR"


class ArchiveError(PrefSpaceError):
    """The run archive could not be reached or written."""

    code = "DATABASE_ERROR"

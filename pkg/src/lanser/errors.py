"""Structured error taxonomy and the process exit-code contract.

Every failure surfaced to a caller is a LanserError subclass carrying a
stable symbol (``E/...``). The process exit code, the bundle's
``meta.exit_code`` and the bundle's ``error.code`` symbol are all derived
from the same table, so they cannot disagree.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any


@dataclass(frozen=True)
class ExitSpec:
    code: int
    symbol: str
    meaning: str
    retryable: str


EXIT_TABLE: tuple[ExitSpec, ...] = (
    ExitSpec(0, "OK", "Success", "-"),
    ExitSpec(1, "E/INTERNAL", "Unexpected internal failure", "no"),
    ExitSpec(2, "E/BAD_SELECTOR_SYNTAX", "Selector parse error", "no"),
    ExitSpec(3, "E/NOT_FOUND", "No resolvable target", "sometimes"),
    ExitSpec(4, "E/AMBIGUOUS", "Multiple candidates", "yes"),
    ExitSpec(10, "E/VERSION_SKEW", "Snapshot mismatch", "yes"),
    ExitSpec(64, "E/LS_TIMEOUT", "Server timeout", "yes"),
    ExitSpec(65, "E/LS_CRASH", "Server crashed", "yes"),
    ExitSpec(70, "E/APPLY_CONFLICT", "Patch could not be applied", "manual"),
    ExitSpec(71, "E/FS_PERMISSIONS", "Write denied", "no"),
    ExitSpec(72, "E/UNSUPPORTED_CAP", "Server lacks capability", "no"),
    ExitSpec(73, "E/REQUEST_CANCELLED", "Request was cancelled", "yes"),
    ExitSpec(74, "E/CONTENT_MODIFIED", "Content changed mid-request", "yes"),
    ExitSpec(75, "E/INDEXING_UNSUPPORTED", "IO indexing unsupported", "no"),
    # Indexing mismatches (position inside a surrogate pair, column past end
    # of line) share exit 75 with the unsupported-indexing family.
    ExitSpec(75, "E/INDEXING_MISMATCH", "Position invalid under indexing", "no"),
    ExitSpec(76, "E/REPLAY_MISMATCH", "Trace/workspace digest mismatch", "no"),
)

BY_SYMBOL: dict[str, ExitSpec] = {spec.symbol: spec for spec in EXIT_TABLE}

EXIT_OK = 0


class LanserError(Exception):
    """Failure with a stable symbol, exit code, and optional payload."""

    symbol = "E/INTERNAL"

    def __init__(self, message: str, *, data: dict[str, Any] | None = None):
        super().__init__(message)
        self.message = message
        self.data = data or {}

    @property
    def exit_code(self) -> int:
        return BY_SYMBOL[self.symbol].code

    @property
    def retryable(self) -> str:
        return BY_SYMBOL[self.symbol].retryable


class BadSelectorSyntax(LanserError):
    symbol = "E/BAD_SELECTOR_SYNTAX"


class NotFound(LanserError):
    symbol = "E/NOT_FOUND"


class Ambiguous(LanserError):
    symbol = "E/AMBIGUOUS"


class VersionSkew(LanserError):
    symbol = "E/VERSION_SKEW"


class LsTimeout(LanserError):
    symbol = "E/LS_TIMEOUT"


class LsCrash(LanserError):
    symbol = "E/LS_CRASH"


class ApplyConflict(LanserError):
    symbol = "E/APPLY_CONFLICT"


class FsPermissions(LanserError):
    symbol = "E/FS_PERMISSIONS"


class UnsupportedCapability(LanserError):
    symbol = "E/UNSUPPORTED_CAP"


class RequestCancelled(LanserError):
    symbol = "E/REQUEST_CANCELLED"


class ContentModified(LanserError):
    symbol = "E/CONTENT_MODIFIED"


class IndexingUnsupported(LanserError):
    symbol = "E/INDEXING_UNSUPPORTED"


class IndexingMismatch(LanserError):
    symbol = "E/INDEXING_MISMATCH"


class ReplayMismatch(LanserError):
    symbol = "E/REPLAY_MISMATCH"

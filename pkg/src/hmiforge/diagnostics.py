"""Positioned diagnostics shared by every stage of the workbench.

Every check result is a `Diagnostic` with a stable code from the closed
registry below; errors point at model source positions, never at
generated output.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

SEVERITIES = ("error", "warning", "info")

# Closed registry of diagnostic codes.  Emitting a code outside this set
# is a bug, guarded by an assertion in Diagnostic.__post_init__.
CODES = frozenset(
    {
        # infrastructure
        "E_IO",
        "E_UNBOUND_PLACEHOLDER",
        "E_TEMPLATE_SYNTAX",
        # feature-model DSL
        "E_SYNTAX",
        "E_DUPLICATE_FEATURE",
        "E_MULTIPLE_PARENTS",
        "E_UNKNOWN_ROOT",
        "E_CYCLE",
        "E_TOO_LARGE",
        # configuration validity
        "E_ROOT_NOT_SELECTED",
        "E_ORPHAN_SELECTION",
        "E_MANDATORY_MISSING",
        "E_XOR_VIOLATION",
        "E_REQUIRES_VIOLATION",
        "E_EXCLUDES_VIOLATION",
        "E_UNKNOWN_FEATURE",
        "E_INVALID_CONFIGURATION",
        # menu-model DSL
        "E_DUPLICATE_NAME",
        "E_NO_START",
        "E_UNRESOLVED_TARGET",
        "W_UNREACHABLE",
        # handler manifest / cross-check
        "E_DUPLICATE_HANDLER",
        "E_UNKNOWN_FEATURE_REF",
        "E_UNKNOWN_ACTION",
        "E_UNKNOWN_STATUSBOX",
        "W_UNUSED_HANDLER",
        # generation
        "E_PRUNED_TARGET",
        "E_START_PRUNED",
        "W_PRUNED_UNREACHABLE",
        # runtime
        "E_BAD_PROGRAM",
    }
)


@dataclass(frozen=True)
class SourceSpan:
    """A 1-based, inclusive region of a source file."""

    file: str
    start_line: int
    start_col: int
    end_line: int
    end_col: int

    def __post_init__(self):
        assert self.start_line >= 1 and self.start_col >= 1
        assert (self.start_line, self.start_col) <= (self.end_line, self.end_col)

    @staticmethod
    def point(file: str, line: int, col: int) -> "SourceSpan":
        return SourceSpan(file, line, col, line, col)


@dataclass(frozen=True)
class Diagnostic:
    severity: str
    code: str
    message: str
    span: Optional[SourceSpan] = None

    def __post_init__(self):
        assert self.severity in SEVERITIES, self.severity
        assert self.code in CODES, f"unknown diagnostic code {self.code}"
        assert self.message

    @property
    def is_error(self) -> bool:
        return self.severity == "error"

    def render(self) -> str:
        """`<file>:<line>:<col>: <severity>[<code>]: <message>`."""
        if self.span is None:
            return f"{self.severity}[{self.code}]: {self.message}"
        s = self.span
        return (
            f"{s.file}:{s.start_line}:{s.start_col}: "
            f"{self.severity}[{self.code}]: {self.message}"
        )


def error(code: str, message: str, span: SourceSpan | None = None) -> Diagnostic:
    return Diagnostic("error", code, message, span)


def warning(code: str, message: str, span: SourceSpan | None = None) -> Diagnostic:
    return Diagnostic("warning", code, message, span)


def sort_key(d: Diagnostic):
    if d.span is None:
        return ("", 0, 0, d.code)
    return (d.span.file, d.span.start_line, d.span.start_col, d.code)


def sorted_diagnostics(diags: list[Diagnostic]) -> list[Diagnostic]:
    """Canonical order: source position, then code.  Stable for goldens."""
    return sorted(diags, key=sort_key)


def has_errors(diags: list[Diagnostic]) -> bool:
    return any(d.is_error for d in diags)


def render_all(diags: list[Diagnostic]) -> str:
    return "".join(d.render() + "\n" for d in diags)

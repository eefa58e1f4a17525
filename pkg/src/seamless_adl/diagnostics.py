from __future__ import annotations

from dataclasses import dataclass, field, replace
from enum import Enum


class Severity(Enum):
    ERROR = "error"
    WARNING = "warning"
    INFO = "info"


@dataclass(frozen=True, order=True)
class SourceLocation:
    file: str
    line: int
    column: int

    def __post_init__(self) -> None:
        if self.line < 1 or self.column < 1:
            raise ValueError(f"invalid source location {self.line}:{self.column}")

    def __str__(self) -> str:
        return f"{self.file}:{self.line}:{self.column}"


@dataclass(frozen=True)
class Diagnostic:
    """One finding from the parser, the lowering pass or a validation rule.

    Parser findings may carry no subjects; everything produced against a
    model names at least one element id, except ``W-EMPTY-MODEL``.
    """

    code: str
    severity: Severity
    subjects: tuple[str, ...] = ()
    message: str = ""
    location: SourceLocation | None = field(default=None, compare=True)

    @property
    def is_error(self) -> bool:
        return self.severity is Severity.ERROR

    def with_severity(self, severity: Severity) -> "Diagnostic":
        return replace(self, severity=severity)

    def sort_key(self) -> tuple:
        return (self.code, self.subjects, self.message)


def has_errors(diagnostics) -> bool:
    return any(d.is_error for d in diagnostics)

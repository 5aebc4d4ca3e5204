"""Diagnostics shared by every compiler stage."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class SourceLocation:
    line: int
    column: int
    file: str | None = None

    def __str__(self) -> str:
        prefix = f"{self.file}:" if self.file else ""
        return f"{prefix}{self.line}:{self.column}"


class HdlError(Exception):
    """A compile error carrying a stable ``E_*`` code.

    ``location`` is either a :class:`SourceLocation` or the text of an
    instance/parameter path, whichever best identifies the culprit.
    """

    def __init__(self, code: str, message: str, location: SourceLocation | str | None = None):
        super().__init__(message)
        self.code = code
        self.message = message
        self.location = location

    def with_location(self, location: SourceLocation | str) -> HdlError:
        if self.location is None:
            self.location = location
        return self

    def render(self, file: str | None = None) -> str:
        loc = self.location
        if isinstance(loc, SourceLocation) and loc.file is None and file:
            loc = SourceLocation(loc.line, loc.column, file)
        where = f" at {loc}" if loc is not None else ""
        return f"error[{self.code}]{where}: {self.message}"

    def __str__(self) -> str:
        return self.render()


class ConfigError(HdlError):
    """Raised for refinement-file and command-line problems (exit code 3)."""

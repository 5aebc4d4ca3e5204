"""Hierarchical instance/port paths such as ``mcu.digital[0]``."""

from __future__ import annotations

import re
from dataclasses import dataclass

from boardhdl.errors import HdlError

IDENT_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_SEGMENT_RE = re.compile(r"([A-Za-z_][A-Za-z0-9_]*)(?:\[(0|[1-9][0-9]*)\])?")


@dataclass(frozen=True)
class Segment:
    name: str
    index: int | None = None

    def __str__(self) -> str:
        return self.name if self.index is None else f"{self.name}[{self.index}]"

    def sort_key(self) -> tuple[str, int]:
        return (self.name, -1 if self.index is None else self.index)


@dataclass(frozen=True)
class Path:
    segments: tuple[Segment, ...]

    @classmethod
    def parse(cls, text: str) -> Path:
        if not text:
            raise HdlError("E_PATH_SYNTAX", "empty path")
        segments = []
        for part in text.split("."):
            m = _SEGMENT_RE.fullmatch(part)
            if m is None:
                raise HdlError("E_PATH_SYNTAX", f"malformed path segment {part!r} in {text!r}")
            index = m.group(2)
            segments.append(Segment(m.group(1), None if index is None else int(index)))
        return cls(tuple(segments))

    @classmethod
    def root(cls) -> Path:
        """The empty path; only used internally as the scope of absolute references."""
        return cls(())

    @classmethod
    def of(cls, *names: str) -> Path:
        return cls(tuple(Segment(n) for n in names))

    def __str__(self) -> str:
        return ".".join(str(s) for s in self.segments)

    def __len__(self) -> int:
        return len(self.segments)

    def __truediv__(self, other: Path | Segment | str) -> Path:
        if isinstance(other, Path):
            return Path(self.segments + other.segments)
        if isinstance(other, str):
            other = Segment(other)
        return Path(self.segments + (other,))

    def child(self, name: str, index: int | None = None) -> Path:
        return Path(self.segments + (Segment(name, index),))

    @property
    def parent(self) -> Path:
        return Path(self.segments[:-1])

    @property
    def last(self) -> Segment:
        return self.segments[-1]

    def startswith(self, prefix: Path) -> bool:
        return self.segments[: len(prefix.segments)] == prefix.segments

    def relative_to(self, prefix: Path) -> Path:
        if not self.startswith(prefix):
            raise ValueError(f"{self} is not under {prefix}")
        return Path(self.segments[len(prefix.segments):])

    def sort_key(self) -> tuple:
        return tuple(s.sort_key() for s in self.segments)


def path_parse(text: str) -> Path:
    return Path.parse(text)

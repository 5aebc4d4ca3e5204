from __future__ import annotations

import re
from dataclasses import dataclass

from boardhdl.errors import HdlError, SourceLocation

KEYWORDS = frozenset(
    {"abstract", "block", "extends", "port", "param", "connect", "export", "check", "true", "false"}
)

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r\n]+)
  | (?P<comment>//[^\n]*)
  | (?P<number>[0-9]+(?:\.[0-9]+)?(?:[eE][+-]?[0-9]+)?)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<string>"(?:[^"\\\n]|\\.)*")
  | (?P<punct>\+-|[{}()\[\].,:=+\-*/%])
    """,
    re.VERBOSE,
)
_UNIT_RE = re.compile(r"[A-Za-z]+")


@dataclass(frozen=True)
class Token:
    kind: str  # identifier | number | unit-suffix | punctuation | keyword | string | end
    text: str
    line: int
    column: int
    offset: int = 0

    @property
    def loc(self) -> SourceLocation:
        return SourceLocation(self.line, self.column)

    def __repr__(self) -> str:
        return f"Token({self.kind} {self.text!r} @{self.line}:{self.column})"


def tokenize(source: str) -> list[Token]:
    tokens: list[Token] = []
    pos, line, line_start = 0, 1, 0
    while pos < len(source):
        m = _TOKEN_RE.match(source, pos)
        col = pos - line_start + 1
        if m is None:
            raise HdlError("E_LEX", f"illegal character {source[pos]!r}", SourceLocation(line, col))
        kind = m.lastgroup
        text = m.group()
        if kind == "number":
            tokens.append(Token("number", text, line, col, pos))
            unit = _UNIT_RE.match(source, m.end())
            if unit:
                # a unit glued to the number: 5mA, 10kOhm
                tokens.append(Token("unit-suffix", unit.group(), line, col + len(text), m.end()))
                m = unit
        elif kind == "ident":
            tokens.append(Token("keyword" if text in KEYWORDS else "identifier", text, line, col, pos))
        elif kind == "string":
            tokens.append(Token("string", text, line, col, pos))
        elif kind == "punct":
            tokens.append(Token("punctuation", text, line, col, pos))
        newlines = text.count("\n") if kind in ("ws", "string") else 0
        if newlines:
            line += newlines
            line_start = pos + text.rindex("\n") + 1
        pos = m.end()
    col = pos - line_start + 1
    tokens.append(Token("end", "", line, col, pos))
    return tokens

"""Recursive-descent parser (one token of lookahead) for ``.bhdl`` sources."""

from __future__ import annotations

from dataclasses import dataclass, field

from boardhdl.errors import HdlError, SourceLocation
from boardhdl.expr import BinOp, Call, Expr, Literal, Neg, Ref
from boardhdl.hdl.lexer import Token, tokenize
from boardhdl.interval import Interval
from boardhdl.paths import Path, Segment
from boardhdl.units import scale_number

PARAM_TYPE_NAMES = ("interval", "bool", "int", "text")


@dataclass(frozen=True)
class Arg:
    name: str
    value: Expr
    loc: SourceLocation


@dataclass(frozen=True)
class PortStmt:
    name: str
    kind: str
    size: int | None
    args: tuple[Arg, ...]
    loc: SourceLocation


@dataclass(frozen=True)
class ParamStmt:
    name: str
    type: str
    default: Expr | None
    loc: SourceLocation


@dataclass(frozen=True)
class InstStmt:
    name: str
    block: str
    args: tuple[Arg, ...]
    loc: SourceLocation


@dataclass(frozen=True)
class PortRef:
    path: Path
    loc: SourceLocation


@dataclass(frozen=True)
class ConnectStmt:
    endpoints: tuple[PortRef, ...]
    loc: SourceLocation


@dataclass(frozen=True)
class ExportStmt:
    name: str
    target: PortRef
    loc: SourceLocation


@dataclass(frozen=True)
class CheckStmt:
    expr: Expr
    loc: SourceLocation


Stmt = PortStmt | ParamStmt | InstStmt | ConnectStmt | ExportStmt | CheckStmt


@dataclass(frozen=True)
class BlockDecl:
    name: str
    parent: str | None
    abstract: bool
    stmts: tuple[Stmt, ...]
    loc: SourceLocation

    def of_type(self, cls) -> list:
        return [s for s in self.stmts if isinstance(s, cls)]


@dataclass(frozen=True)
class DesignAst:
    blocks: tuple[BlockDecl, ...] = field(default_factory=tuple)


class _Parser:
    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.pos = 0

    @property
    def tok(self) -> Token:
        return self.tokens[self.pos]

    def peek(self, ahead: int = 1) -> Token:
        return self.tokens[min(self.pos + ahead, len(self.tokens) - 1)]

    def advance(self) -> Token:
        tok = self.tok
        if tok.kind != "end":
            self.pos += 1
        return tok

    def at(self, text: str) -> bool:
        return self.tok.kind in ("punctuation", "keyword") and self.tok.text == text

    def fail(self, expected: str):
        tok = self.tok
        found = "end of input" if tok.kind == "end" else f"{tok.text!r}"
        raise HdlError("E_PARSE", f"expected {expected}, found {found}", tok.loc)

    def expect(self, text: str) -> Token:
        if not self.at(text):
            self.fail(repr(text))
        return self.advance()

    def ident(self, what: str = "identifier") -> Token:
        if self.tok.kind != "identifier":
            self.fail(what)
        return self.advance()

    def integer(self) -> int:
        tok = self.tok
        if tok.kind != "number" or not tok.text.isdigit() or self.peek().kind == "unit-suffix":
            self.fail("integer")
        self.advance()
        return int(tok.text)

    # file := blockdecl*
    def design(self) -> DesignAst:
        blocks = []
        while self.tok.kind != "end":
            blocks.append(self.block())
        return DesignAst(tuple(blocks))

    def block(self) -> BlockDecl:
        start = self.tok
        abstract = False
        if self.at("abstract"):
            self.advance()
            abstract = True
        self.expect("block")
        name = self.ident("block name").text
        parent = None
        if self.at("extends"):
            self.advance()
            parent = self.ident("parent block name").text
        self.expect("{")
        stmts = []
        while not self.at("}"):
            stmts.append(self.stmt())
        self.expect("}")
        return BlockDecl(name, parent, abstract, tuple(stmts), start.loc)

    def stmt(self) -> Stmt:
        tok = self.tok
        if self.at("port"):
            return self.port_stmt()
        if self.at("param"):
            return self.param_stmt()
        if self.at("connect"):
            self.advance()
            self.expect("(")
            endpoints = [self.portref()]
            while self.at(","):
                self.advance()
                endpoints.append(self.portref())
            if len(endpoints) < 2:
                self.fail("','")
            self.expect(")")
            return ConnectStmt(tuple(endpoints), tok.loc)
        if self.at("export"):
            self.advance()
            name = self.ident("port name").text
            self.expect("=")
            return ExportStmt(name, self.portref(), tok.loc)
        if self.at("check"):
            self.advance()
            self.expect("(")
            expr = self.expr()
            self.expect(")")
            return CheckStmt(expr, tok.loc)
        if tok.kind == "identifier":
            name = self.advance().text
            self.expect("=")
            block = self.ident("block name").text
            self.expect("(")
            args = () if self.at(")") else self.args()
            self.expect(")")
            return InstStmt(name, block, args, tok.loc)
        self.fail("statement")

    def port_stmt(self) -> PortStmt:
        start = self.expect("port")
        name = self.ident("port name").text
        self.expect(":")
        kind = self.ident("port kind").text
        size = None
        if self.at("["):
            self.advance()
            size = self.integer()
            self.expect("]")
        args: tuple[Arg, ...] = ()
        if self.at("("):
            self.advance()
            args = () if self.at(")") else self.args()
            self.expect(")")
        return PortStmt(name, kind, size, args, start.loc)

    def param_stmt(self) -> ParamStmt:
        start = self.expect("param")
        name = self.ident("parameter name").text
        self.expect(":")
        type_tok = self.tok
        if type_tok.kind != "identifier" or type_tok.text not in PARAM_TYPE_NAMES:
            self.fail("parameter type (interval, bool, int, text)")
        self.advance()
        default = None
        if self.at("="):
            self.advance()
            default = self.expr()
        return ParamStmt(name, type_tok.text, default, start.loc)

    def args(self) -> tuple[Arg, ...]:
        out = [self.arg()]
        while self.at(","):
            self.advance()
            out.append(self.arg())
        return tuple(out)

    def arg(self) -> Arg:
        tok = self.ident("argument name")
        self.expect("=")
        return Arg(tok.text, self.expr(), tok.loc)

    def portref(self) -> PortRef:
        tok = self.tok
        return PortRef(self.path(), tok.loc)

    def path(self) -> Path:
        segments = [self.segment()]
        while self.at("."):
            self.advance()
            segments.append(self.segment())
        return Path(tuple(segments))

    def segment(self) -> Segment:
        name = self.ident().text
        if self.at("["):
            self.advance()
            index = self.integer()
            self.expect("]")
            return Segment(name, index)
        return Segment(name)

    # expr := term (('+'|'-') term)*
    def expr(self) -> Expr:
        left = self.term()
        while self.at("+") or self.at("-"):
            op = self.advance()
            left = BinOp(op.text, left, self.term(), op.loc)
        return left

    def term(self) -> Expr:
        left = self.unary()
        while self.at("*") or self.at("/"):
            op = self.advance()
            left = BinOp(op.text, left, self.unary(), op.loc)
        return left

    def unary(self) -> Expr:
        if self.at("-"):
            tok = self.advance()
            return Neg(self.unary(), tok.loc)
        return self.primary()

    def primary(self) -> Expr:
        tok = self.tok
        if tok.kind == "number":
            return self.quantity()
        if tok.kind == "string":
            self.advance()
            return Literal(_unescape(tok.text[1:-1]), tok.loc)
        if self.at("true") or self.at("false"):
            self.advance()
            return Literal(tok.text == "true", tok.loc)
        if self.at("("):
            self.advance()
            inner = self.expr()
            self.expect(")")
            return inner
        if tok.kind == "identifier":
            if self.peek().kind == "punctuation" and self.peek().text == "(":
                self.advance()
                self.advance()
                args = [self.expr()]
                while self.at(","):
                    self.advance()
                    args.append(self.expr())
                self.expect(")")
                return Call(tok.text, tuple(args), tok.loc)
            return Ref(self.path(), tok.loc)
        self.fail("expression")

    def quantity(self) -> Literal:
        start = self.advance()
        unit = self.advance().text if self.tok.kind == "unit-suffix" else ""
        try:
            center, dim = scale_number(start.text, unit)
        except HdlError as err:
            raise err.with_location(start.loc)
        if not self.at("+-"):
            if not unit and start.text.isdigit():
                return Literal(int(start.text), start.loc)
            return Literal(Interval.point(center, dim), start.loc)
        self.advance()
        if self.tok.kind != "number":
            self.fail("tolerance")
        tol_tok = self.advance()
        if self.at("%"):
            self.advance()
            tol = abs(center) * float(tol_tok.text) / 100.0
        else:
            tunit = self.advance().text if self.tok.kind == "unit-suffix" else ""
            try:
                tol, tdim = scale_number(tol_tok.text, tunit)
            except HdlError as err:
                raise err.with_location(tol_tok.loc)
            if tdim != dim:
                raise HdlError("E_UNIT_MISMATCH", "tolerance unit differs from value unit", tol_tok.loc)
        return Literal(Interval(center - tol, center + tol, dim), start.loc)


def _unescape(text: str) -> str:
    out, i = [], 0
    while i < len(text):
        ch = text[i]
        if ch == "\\" and i + 1 < len(text):
            nxt = text[i + 1]
            out.append({"n": "\n", "t": "\t"}.get(nxt, nxt))
            i += 2
        else:
            out.append(ch)
            i += 1
    return "".join(out)


def parse_design(tokens: list[Token]) -> DesignAst:
    return _Parser(tokens).design()


def parse_expr(text: str) -> Expr:
    parser = _Parser(tokenize(text))
    expr = parser.expr()
    if parser.tok.kind != "end":
        parser.fail("end of expression")
    return expr


def parse_source(source: str) -> DesignAst:
    return parse_design(tokenize(source))

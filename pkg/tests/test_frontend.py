import pytest

from boardhdl.compiler import build_library, compile_source
from boardhdl.errors import HdlError
from boardhdl.hdl.lexer import tokenize
from boardhdl.hdl.parser import parse_design, parse_expr
from boardhdl.expr import BinOp, Call, Literal, Ref
from boardhdl.interval import Interval
from boardhdl.model import Structural
from boardhdl.paths import Path
from boardhdl.units import AMPERE, VOLT


def kinds(src):
    return [(t.kind, t.text) for t in tokenize(src)]


class TestLexer:
    def test_unit_suffix_is_glued(self):
        assert kinds("5mA") == [("number", "5"), ("unit-suffix", "mA"), ("end", "")]

    def test_keywords_and_punctuation(self):
        assert kinds("block B { port p: Passive }") == [
            ("keyword", "block"), ("identifier", "B"), ("punctuation", "{"),
            ("keyword", "port"), ("identifier", "p"), ("punctuation", ":"),
            ("identifier", "Passive"), ("punctuation", "}"), ("end", ""),
        ]

    def test_plus_minus_single_token(self):
        assert ("punctuation", "+-") in kinds("2V +- 0.2V")

    def test_comments_skipped(self):
        assert kinds("// hello\nx") == [("identifier", "x"), ("end", "")]

    def test_positions(self):
        tok = tokenize("a\n  bc")[1]
        assert (tok.line, tok.column) == (2, 3)

    def test_illegal_character(self):
        with pytest.raises(HdlError) as exc:
            tokenize("a\n  $")
        assert exc.value.code == "E_LEX"
        assert (exc.value.location.line, exc.value.location.column) == (2, 3)


class TestParser:
    def test_blinky_shape(self, blinky_source):
        ast = parse_design(tokenize(blinky_source))
        (block,) = ast.blocks
        assert block.name == "Blinky"
        assert len(block.stmts) == 4

    def test_quantity_tolerance(self):
        assert parse_expr("5mA +- 1mA") == Literal(Interval(0.004, 0.006, AMPERE))

    def test_precedence(self):
        e = parse_expr("a + b * c")
        assert isinstance(e, BinOp) and e.op == "+"
        assert isinstance(e.right, BinOp) and e.right.op == "*"

    def test_call_and_ref(self):
        e = parse_expr("subset_of(io.voltage, range(0V, 5V))")
        assert isinstance(e, Call) and e.fn == "subset_of"
        assert e.args[0] == Ref(Path.parse("io.voltage"))

    def test_error_message(self):
        with pytest.raises(HdlError) as exc:
            parse_design(tokenize("block B { x = }"))
        assert exc.value.code == "E_PARSE"
        assert "expected" in exc.value.message and "found" in exc.value.message
        assert exc.value.location.line == 1


class TestLower:
    def test_structural_body(self, blinky_source):
        lib = build_library(blinky_source)
        body = lib.lookup("Blinky").body
        assert isinstance(body, Structural)
        assert [i.name for i in body.instances] == ["mcu", "led"]
        assert len(body.connects) == 2

    @pytest.mark.parametrize(
        "src,code",
        [
            ("block B {}\nblock B {}", "E_DUP_DEF"),
            ("block B { x = Nope() }", "E_UNKNOWN_BLOCK"),
            ("block B { r = Resistor(ohms = 1kOhm) }", "E_UNKNOWN_PARAM"),
            ("block B { r = Resistor(resistance = true) }", "E_ARG_TYPE"),
            ("block B { port p: Passive\n port p: Passive }", "E_DUP_DEF"),
            ("block B { r = Resistor()\n connect(r.p3, r.p1) }", "E_UNKNOWN_PORT"),
            ("block B { m = MagicMcu()\n connect(m.digital[7], m.gnd) }", "E_UNKNOWN_PORT"),
            ("block B { port p: Passive\n r = Resistor()\n export p = r.p9 }", "E_UNKNOWN_PORT"),
            ("block B { port p: Passive(voltage = 1V) }", "E_UNKNOWN_PARAM"),
            ("block B { param x: int = 1\n param x: int = 2 }", "E_DUP_DEF"),
        ],
    )
    def test_errors(self, src, code):
        with pytest.raises(HdlError) as exc:
            build_library(src)
        assert exc.value.code == code

    def test_unknown_block_has_location(self):
        with pytest.raises(HdlError) as exc:
            build_library("block B {\n  x = Nope()\n}")
        assert exc.value.location.line == 2

    def test_inheritance(self):
        lib = build_library(
            "block A { port p: Passive\n param k: int = 1 }\n"
            "block B extends A { param j: int = 2 }"
        )
        b = lib.lookup("B")
        assert set(b.ports) == {"p"} and set(b.params) == {"k", "j"}
        assert lib.is_subtype("B", "A")

    @pytest.mark.parametrize(
        "src,top",
        [
            ("block B { r = Resistor(resistance = 5V) }", "B"),
            ("block S { port o: VoltageSource(voltage_out = 1A, current_limits = range(0A, 1A)) }", "S"),
        ],
    )
    def test_dimension_checked_when_bound(self, src, top):
        with pytest.raises(HdlError) as exc:
            compile_source(src, top)
        assert exc.value.code == "E_DIM_MISMATCH"

import pytest
from hypothesis import given, strategies as st

from boardhdl.errors import HdlError
from boardhdl.paths import Path, Segment
from boardhdl.units import (
    AMPERE, DIMENSIONLESS, FARAD, HENRY, HERTZ, OHM, VOLT, WATT,
    Dimension, dimension_combine, format_si, quantity_parse,
)
from boardhdl.interval import Interval


class TestPath:
    def test_indexed_segment(self):
        assert Path.parse("mcu.digital[0]") == Path((Segment("mcu"), Segment("digital", 0)))

    def test_single_segment(self):
        assert Path.parse("led") == Path((Segment("led"),))

    @pytest.mark.parametrize("text", ["a..b", "", ".a", "a.", "a[b]", "a[-1]", "1a", "a[01]", "a[0][1]"])
    def test_malformed(self, text):
        with pytest.raises(HdlError) as exc:
            Path.parse(text)
        assert exc.value.code == "E_PATH_SYNTAX"

    def test_render(self):
        assert str(Path.parse("blinky.mcu.digital[3]")) == "blinky.mcu.digital[3]"

    @given(
        st.lists(
            st.tuples(
                st.from_regex(r"[A-Za-z_][A-Za-z0-9_]{0,6}", fullmatch=True),
                st.one_of(st.none(), st.integers(0, 500)),
            ),
            min_size=1,
            max_size=5,
        )
    )
    def test_round_trip(self, segs):
        text = ".".join(n if i is None else f"{n}[{i}]" for n, i in segs)
        p = Path.parse(text)
        assert str(p) == text
        assert Path.parse(str(p)) == p


class TestDimensions:
    def test_unit_table(self):
        assert VOLT.exponents == (2, 1, -3, -1)
        assert AMPERE.exponents == (0, 0, 0, 1)
        assert OHM.exponents == (2, 1, -3, -2)
        assert FARAD.exponents == (-2, -1, 4, 2)
        assert HENRY.exponents == (2, 1, -2, -2)
        assert HERTZ.exponents == (0, 0, -1, 0)
        assert WATT.exponents == (2, 1, -3, 0)
        assert DIMENSIONLESS.exponents == (0, 0, 0, 0)

    def test_volt_per_amp_is_ohm(self):
        # (2,1,-3,-1) - (0,0,0,1)
        assert dimension_combine(VOLT, AMPERE, "/").exponents == (2, 1, -3, -2)

    def test_add_same(self):
        assert dimension_combine(VOLT, VOLT, "+") == VOLT

    def test_add_mismatch(self):
        with pytest.raises(HdlError) as exc:
            dimension_combine(VOLT, AMPERE, "+")
        assert exc.value.code == "E_DIM_MISMATCH"

    def test_closure_identities(self):
        assert OHM * AMPERE == VOLT
        assert VOLT * AMPERE == WATT
        assert DIMENSIONLESS / (HERTZ * FARAD) == OHM


class TestQuantity:
    def test_absolute_tolerance(self):
        q = quantity_parse("5mA +- 1mA")
        assert (q.lo, q.hi, q.dim) == (pytest.approx(0.004), pytest.approx(0.006), AMPERE)

    def test_point(self):
        assert quantity_parse("3.3V") == Interval(3.3, 3.3, VOLT)

    def test_percent(self):
        q = quantity_parse("10kOhm +- 5%")
        assert (q.lo, q.hi, q.dim) == (9500, 10500, OHM)

    def test_prefixes(self):
        assert quantity_parse("500kHz").lo == 500e3
        assert quantity_parse("2.7uF").lo == 2.7e-6
        assert quantity_parse("1GHz").lo == 1e9
        assert quantity_parse("4.7pF").lo == 4.7e-12
        assert quantity_parse("3MOhm").lo == 3e6

    def test_unknown_unit(self):
        with pytest.raises(HdlError) as exc:
            quantity_parse("5furlong")
        assert exc.value.code == "E_UNIT_UNKNOWN"

    def test_syntax(self):
        with pytest.raises(HdlError) as exc:
            quantity_parse("V5")
        assert exc.value.code == "E_QTY_SYNTAX"

    def test_tolerance_unit_mismatch(self):
        with pytest.raises(HdlError) as exc:
            quantity_parse("5V +- 1mA")
        assert exc.value.code == "E_UNIT_MISMATCH"


class TestInterval:
    def test_lo_above_hi_rejected(self):
        with pytest.raises(HdlError):
            Interval(2.0, 1.0, VOLT)

    def test_point(self):
        assert Interval.point(3.3, VOLT).is_point


@pytest.mark.parametrize(
    "value,text",
    [(270.0, "270"), (20000.0, "20k"), (2.7e-6, "2.7u"), (18e-6, "18u"), (10e-6, "10u"), (4.7e-12, "4.7p"), (1.5e6, "1.5M")],
)
def test_format_si(value, text):
    assert format_si(value) == text

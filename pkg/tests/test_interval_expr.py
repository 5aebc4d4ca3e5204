import pytest
from hypothesis import given, strategies as st

from boardhdl.errors import HdlError
from boardhdl.expr import eval_expr, format_value, value_to_json
from boardhdl.hdl.parser import parse_expr
from boardhdl.interval import Empty, Interval, interval_arith, interval_set
from boardhdl.units import AMPERE, OHM, VOLT, WATT


def iv(lo, hi, dim=VOLT):
    return Interval(lo, hi, dim)


class TestArith:
    def test_add(self):
        assert interval_arith("+", iv(1, 2), iv(3, 4)) == iv(4, 6)

    def test_sub(self):
        assert interval_arith("-", iv(1, 2), iv(3, 4)) == iv(-3, -1)

    def test_mul_signs(self):
        assert interval_arith("*", iv(-1, 2), Interval(-3, 4, AMPERE)) == Interval(-6, 8, WATT)

    def test_div_dimension(self):
        assert interval_arith("/", iv(3.3, 3.3), Interval(0.005, 0.005, AMPERE)) == Interval(660.0, 660.0, OHM)

    def test_div_zero(self):
        with pytest.raises(HdlError) as exc:
            interval_arith("/", iv(1, 2), Interval(-1, 1, AMPERE))
        assert exc.value.code == "E_DIV_ZERO"

    def test_dim_mismatch(self):
        with pytest.raises(HdlError) as exc:
            interval_arith("+", iv(1, 2), Interval(1, 2, AMPERE))
        assert exc.value.code == "E_DIM_MISMATCH"

    def test_empty_propagates(self):
        assert isinstance(interval_arith("+", Empty(VOLT), iv(1, 2)), Empty)


class TestSetOps:
    def test_subset(self):
        assert interval_set("subset_of", iv(3.3, 3.3), iv(0, 5.5))
        assert not interval_set("subset_of", iv(12, 12), iv(2, 5.5))

    def test_subset_tolerance(self):
        assert interval_set("subset_of", iv(0, 5.5 + 1e-12), iv(0, 5.5))

    def test_contains(self):
        assert interval_set("contains", iv(0.4, 2.9), iv(0.8, 2.0))

    def test_intersect_disjoint_is_empty(self):
        assert isinstance(interval_set("intersect", iv(0, 1), iv(2, 3)), Empty)

    def test_hull(self):
        assert interval_set("hull", iv(0, 1), iv(2, 3)) == iv(0, 3)


finite = st.floats(-1e6, 1e6, allow_nan=False)


@st.composite
def intervals(draw):
    a, b = draw(finite), draw(finite)
    return iv(min(a, b), max(a, b))


@given(intervals(), intervals(), st.sampled_from("+-*"), st.floats(0, 1), st.floats(0, 1))
def test_arith_contains_samples(a, b, op, s, t):
    x = a.lo + (a.hi - a.lo) * s
    y = b.lo + (b.hi - b.lo) * t
    x, y = min(max(x, a.lo), a.hi), min(max(y, b.lo), b.hi)
    bb = b if op in "+-" else Interval(b.lo, b.hi, AMPERE)
    res = interval_arith(op, a, bb)
    value = {"+": x + y, "-": x - y, "*": x * y}[op]
    assert res.lo <= value <= res.hi


@given(intervals(), intervals())
def test_hull_contains_both(a, b):
    h = interval_set("hull", a, b)
    assert interval_set("subset_of", a, h) and interval_set("subset_of", b, h)


@given(intervals(), intervals())
def test_intersect_is_subset(a, b):
    i = interval_set("intersect", a, b)
    if not isinstance(i, Empty):
        assert interval_set("subset_of", i, a) and interval_set("subset_of", i, b)


class TestEval:
    def lookup(self, path):
        return {"v": iv(3.3, 3.3), "i": Interval(0.005, 0.005, AMPERE), "n": 4}[str(path)]

    def test_ohms_law(self):
        assert eval_expr(parse_expr("v / i"), self.lookup) == Interval(660.0, 660.0, OHM)

    def test_int_arith_stays_int(self):
        assert eval_expr(parse_expr("n + 1"), self.lookup) == 5

    def test_functions(self):
        assert eval_expr(parse_expr("subset_of(v, range(0V, 5V))"), self.lookup) is True
        assert eval_expr(parse_expr("max(range(1V, 2V), range(0V, 3V))"), self.lookup) == iv(1, 3)

    def test_sum_over_sinks(self):
        from boardhdl.expr import SumOverSinks

        total = eval_expr(SumOverSinks("current_draw"), self.lookup,
                          lambda p: [Interval(0.001, 0.002, AMPERE), Interval(0.003, 0.004, AMPERE)])
        assert total.lo == pytest.approx(0.004) and total.hi == pytest.approx(0.006)

    def test_json(self):
        assert value_to_json(iv(12, 12)) == {"lo": 12.0, "hi": 12.0, "unit": "V"}
        assert value_to_json(Empty(VOLT)) == {"empty": True, "unit": "V"}

    def test_format(self):
        assert format_value(True) == "true"

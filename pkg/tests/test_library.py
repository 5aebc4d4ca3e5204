import math

import pytest
from hypothesis import given, strategies as st

from boardhdl.errors import HdlError
from boardhdl.interval import Interval
from boardhdl.library.generators import buck_design, divider_resistances, led_resistance
from boardhdl.library.series import E12, E24, nearest_standard_value
from boardhdl.units import AMPERE, DIMENSIONLESS, HERTZ, OHM, VOLT


class TestRegistry:
    def test_lookup(self, library):
        assert library.lookup("Resistor").kind == "leaf"
        assert library.lookup("BuckConverter").abstract
        assert library.lookup("BuckConverter").default_refinement == "Tps561201Buck"

    def test_unknown(self, library):
        with pytest.raises(HdlError) as exc:
            library.lookup("FluxCapacitor")
        assert exc.value.code == "E_UNKNOWN_BLOCK"

    def test_subtypes(self, library):
        assert library.is_subtype("Lmr33630Buck", "PowerConverter")
        assert library.is_subtype("Resistor", "Resistor")
        assert not library.is_subtype("Resistor", "Capacitor")
        assert set(library.subtypes("BuckConverter")) >= {"Tps561201Buck", "Lmr33630Buck"}


class TestSeries:
    @pytest.mark.parametrize(
        "target,series,mode,expected",
        [
            (650.0, E24, "round_up", 680.0),
            (650.0, E24, "round_down", 620.0),
            (650.0, E24, "nearest", 620.0),  # equidistant, tie goes to the smaller value
            (260.0, E24, "round_up", 270.0),
            (15.95e-6, E12, "round_up", 18e-6),
            (2.2727e-6, E12, "round_up", 2.7e-6),
            (2.2e-6, E12, "round_up", 2.2e-6),
            (20000.0, E24, "nearest", 20000.0),
            (9.6, E24, "round_up", 10.0),
        ],
    )
    def test_values(self, target, series, mode, expected):
        assert nearest_standard_value(target, series, mode) == expected

    def test_exact_decimal(self):
        assert nearest_standard_value(2.7e-6, E12, "nearest") == 2.7e-6
        assert repr(E12.value(27, -6)) == "2.7e-06"

    @pytest.mark.parametrize("bad", [0.0, -1.0, math.inf, math.nan])
    def test_domain(self, bad):
        with pytest.raises(HdlError) as exc:
            nearest_standard_value(bad, E24)
        assert exc.value.code == "E_DOMAIN"

    @given(st.floats(1e-9, 1e9))
    def test_round_up_brackets(self, x):
        up = nearest_standard_value(x, E24, "round_up")
        down = nearest_standard_value(x, E24, "round_down")
        assert down <= x * (1 + 1e-9) and up >= x * (1 - 1e-9)
        between = [E24.value(m, k) for k in range(-9, 11) for m in E24.mantissas]
        assert not [v for v in between if down < v < up]


class TestGenerators:
    def test_led_blinky(self):
        # (3.3 - 2.0) / 5mA = 260 -> 270
        r = led_resistance(Interval.point(3.3, VOLT), Interval(1.8, 2.2, VOLT), Interval(0.004, 0.006, AMPERE))
        assert r == 270.0

    def test_led_no_headroom(self):
        with pytest.raises(ValueError):
            led_resistance(Interval.point(1.5, VOLT), Interval.point(2.0, VOLT), Interval.point(0.005, AMPERE))

    def test_divider(self):
        assert divider_resistances(Interval(0.48, 0.52, DIMENSIONLESS), Interval.point(10e3, OHM)) == (20e3, 20e3)

    def test_divider_bad_ratio(self):
        with pytest.raises(ValueError):
            divider_resistances(Interval.point(1.5, DIMENSIONLESS), Interval.point(10e3, OHM))

    def test_buck_duty(self):
        d = buck_design(
            Interval.point(12, VOLT), Interval.point(3.3, VOLT), Interval(0, 1, AMPERE),
            Interval.point(500e3, HERTZ), Interval.point(0.3, DIMENSIONLESS),
        )
        assert d.duty == pytest.approx(0.275)

    def test_buck_rejects_boost(self):
        with pytest.raises(ValueError):
            buck_design(
                Interval.point(3, VOLT), Interval.point(5, VOLT), Interval(0, 1, AMPERE),
                Interval.point(500e3, HERTZ), Interval.point(0.3, DIMENSIONLESS),
            )

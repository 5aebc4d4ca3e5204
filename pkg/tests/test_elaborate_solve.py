import random

import pytest

import boardhdl.elaborate as elab_mod
from boardhdl.compiler import compile_source
from boardhdl.design import infer_link_kind
from boardhdl.errors import HdlError
from boardhdl.interval import Interval
from boardhdl.model import LinkKind, PortKind as K
from boardhdl.solver import solve
from boardhdl.units import AMPERE, OHM, VOLT

from conftest import DESIGNS


@pytest.mark.parametrize(
    "kinds,expected",
    [
        ((K.VOLTAGE_SOURCE, K.VOLTAGE_SINK), LinkKind.POWER),
        ((K.VOLTAGE_SOURCE, K.VOLTAGE_SINK, K.VOLTAGE_SINK), LinkKind.POWER),
        ((K.DIGITAL_SOURCE, K.DIGITAL_SINK), LinkKind.DIGITAL),
        ((K.PASSIVE, K.PASSIVE), LinkKind.PASSIVE_NET),
        ((K.DIGITAL_SOURCE, K.PASSIVE), LinkKind.PASSIVE_NET),
    ],
)
def test_infer_link_kind(kinds, expected):
    assert infer_link_kind(kinds) == expected


@pytest.mark.parametrize(
    "kinds",
    [(K.VOLTAGE_SOURCE, K.VOLTAGE_SOURCE), (K.VOLTAGE_SINK, K.VOLTAGE_SINK), (K.VOLTAGE_SINK, K.DIGITAL_SINK), (K.PASSIVE,)],
)
def test_incompatible_links(kinds):
    with pytest.raises(HdlError) as exc:
        infer_link_kind(kinds)
    assert exc.value.code == "E_CONNECT_KIND"


@pytest.fixture(scope="module")
def design(blinky_source):
    return compile_source(blinky_source, "Blinky").design


class TestBlinky:
    def test_two_rounds(self, design):
        # round 1 solves the link voltage, the generator fires, round 2 is quiescent
        assert design.rounds == 2

    def test_link_voltage_propagates(self, design):
        assert design.param("blinky.digital0_net.voltage") == Interval(3.3, 3.3, VOLT)

    def test_generated_resistance(self, design):
        assert design.param("blinky.led.resistance") == Interval(270.0, 270.0, OHM)

    def test_current_draw_sums_sinks(self, design):
        # (3.3 - 2.2) / 270 .. (3.3 - 1.8) / 270
        draw = design.param("blinky.digital0_net.current_draw")
        assert draw.dim == AMPERE
        assert draw.lo == pytest.approx(1.1 / 270) and draw.hi == pytest.approx(1.5 / 270)

    def test_nothing_unsolved(self, design):
        assert design.unsolved == []


def _bindings(source, top, monkeypatch, seed):
    rng = random.Random(seed)
    monkeypatch.setattr(elab_mod, "solve", lambda design: solve(design, rng))
    design = compile_source(source, top).design
    return {k: v for k, v in design.bindings.items()}


@pytest.mark.parametrize("name,top", [("blinky.bhdl", "Blinky"), ("sensor_divider.bhdl", "SensorDivider"), ("buck_demo.bhdl", "BuckDemo")])
def test_solve_order_independent(name, top, monkeypatch):
    source = (DESIGNS / name).read_text()
    reference = compile_source(source, top).design.bindings
    for seed in range(5):
        assert _bindings(source, top, monkeypatch, seed) == reference


def test_param_cycle():
    src = "block B { param a: interval = b\n param b: interval = a }"
    with pytest.raises(HdlError) as exc:
        compile_source(src, "B")
    assert exc.value.code == "E_PARAM_CYCLE"


def test_multiple_drivers_rejected():
    src = """
    block S { port o: VoltageSource(voltage_out = 5V, current_limits = range(0A, 1A)) }
    block B { a = S()
      b = S()
      connect(a.o, b.o) }
    """
    with pytest.raises(HdlError) as exc:
        compile_source(src, "B")
    assert exc.value.code == "E_CONNECT_KIND"


def test_abstract_default_used():
    design = compile_source((DESIGNS / "buck_demo.bhdl").read_text(), "BuckDemo").design
    defs = {str(i.path): i.definition for i in design.root.walk()}
    assert defs["buck_demo.stage.reg"] == "Tps561201Buck"


def test_unrefined_abstract():
    with pytest.raises(HdlError) as exc:
        compile_source("block B { c = PowerConverter() }", "B")
    assert exc.value.code == "E_ABSTRACT_UNREFINED"
    assert "Lmr33630Buck" in exc.value.message and "Tps561201Buck" in exc.value.message


def test_infeasible_generator():
    src = """
    block Low { port o: DigitalSource(voltage_out = 1.5V, current_limits = range(0A, 10mA),
                                       output_thresholds = range(0.1V, 1.4V)) }
    block B { s = Low()
      led = IndicatorLed()
      connect(s.o, led.io) }
    """
    with pytest.raises(HdlError) as exc:
        compile_source(src, "B")
    assert exc.value.code == "E_GEN_INFEASIBLE"
    assert "b.led" in str(exc.value.location) or "b.led" in exc.value.message

"""The built-in block library."""

from __future__ import annotations

from functools import lru_cache

from boardhdl.expr import Literal
from boardhdl.hdl.parser import parse_expr
from boardhdl.interval import Interval
from boardhdl.library.generators import (
    indicator_led_generate,
    make_buck_generate,
    voltage_divider_generate,
)
from boardhdl.library.registry import LibraryRegistry
from boardhdl.model import BlockDefinition, Generator, Leaf, ParamDecl, PortDecl, PortKind
from boardhdl.paths import Path
from boardhdl.units import AMPERE, DIMENSIONLESS, FARAD, HENRY, HERTZ, OHM, VOLT

GROUND_LIMITS = "0V +- 0.1V"


def _port(name: str, kind: PortKind, size: int | None = None, **params: str) -> PortDecl:
    return PortDecl(name, kind, size, {k: parse_expr(v) for k, v in params.items()})


def _param(name: str, type_: str = "interval", default: str | None = None, dim=None) -> ParamDecl:
    return ParamDecl(name, type_, None if default is None else parse_expr(default), dim)


def _ports(*decls: PortDecl) -> dict[str, PortDecl]:
    return {d.name: d for d in decls}


def _params(*decls: ParamDecl) -> dict[str, ParamDecl]:
    return {d.name: d for d in decls}


def _two_terminal(name: str, param: str, dim, footprint: str, prefix: str, doc: str) -> BlockDefinition:
    return BlockDefinition(
        name,
        ports=_ports(PortDecl("p1", PortKind.PASSIVE), PortDecl("p2", PortKind.PASSIVE)),
        params=_params(_param(param, dim=dim)),
        body=Leaf(footprint, prefix, parse_expr(param), {Path.of("p1"): "1", Path.of("p2"): "2"}),
        doc=doc,
    )


def _controller(name: str, part: str, footprint: str) -> BlockDefinition:
    pins = ("gnd", "sw", "vin", "fb")
    return BlockDefinition(
        name,
        ports=_ports(*(PortDecl(p, PortKind.PASSIVE) for p in pins)),
        body=Leaf(footprint, "U", Literal(part), {Path.of(p): str(i + 1) for i, p in enumerate(pins)}),
        doc=f"{part} synchronous buck controller",
    )


def _power_ports() -> dict[str, PortDecl]:
    return _ports(
        PortDecl("pwr_in", PortKind.VOLTAGE_SINK),
        PortDecl("pwr_out", PortKind.VOLTAGE_SOURCE),
        _port("gnd", PortKind.VOLTAGE_SINK, voltage_limits=GROUND_LIMITS),
    )


def _converter_params(buck: bool) -> dict[str, ParamDecl]:
    params = [_param("output_voltage", dim=VOLT), _param("output_current", dim=AMPERE)]
    if buck:
        params += [
            _param("frequency", default="500kHz", dim=HERTZ),
            _param("ripple_ratio", default="0.3", dim=DIMENSIONLESS),
            _param("inductance", dim=HENRY),
            _param("capacitance", dim=FARAD),
            _param("duty", dim=DIMENSIONLESS),
            _param("input_voltage", dim=VOLT),
            _param("input_rating", dim=VOLT),
        ]
    return _params(*params)


BUCK_DEPENDENCIES = ("link(pwr_in).voltage", "output_voltage", "output_current", "frequency", "ripple_ratio")

# concrete buck subtypes: (block name, controller leaf, part, footprint, input rating)
BUCK_VARIANTS = (
    ("Tps561201Buck", "Tps561201", "TPS561201", "SOT-23-6", Interval(4.5, 17.0, VOLT)),
    ("Lmr33630Buck", "Lmr33630", "LMR33630", "SOIC-8", Interval(4.0, 36.0, VOLT)),
)


def _definitions() -> list[BlockDefinition]:
    defs = [
        _two_terminal("Resistor", "resistance", OHM, "R_0603", "R", "Fixed resistor"),
        _two_terminal("Capacitor", "capacitance", FARAD, "C_0805", "C", "Ceramic capacitor"),
        _two_terminal("Inductor", "inductance", HENRY, "L_1210", "L", "Power inductor"),
        BlockDefinition(
            "Led",
            ports=_ports(PortDecl("anode", PortKind.PASSIVE), PortDecl("cathode", PortKind.PASSIVE)),
            params=_params(
                _param("forward_voltage", default="2V +- 0.2V", dim=VOLT),
                _param("current_limits", default="range(1mA, 20mA)", dim=AMPERE),
                _param("color", "text", default='"red"'),
            ),
            body=Leaf("LED_0603", "D", parse_expr("color"), {Path.of("anode"): "A", Path.of("cathode"): "K"}),
            doc="Indicator LED",
        ),
        BlockDefinition(
            "MagicMcu",
            ports=_ports(
                _port("gnd", PortKind.VOLTAGE_SOURCE, voltage_out="0V", current_limits="range(0A, 200mA)"),
                _port(
                    "digital",
                    PortKind.DIGITAL_SOURCE,
                    4,
                    voltage_out="rail",
                    output_thresholds="range(0.4V, 2.9V)",
                    current_limits="range(0A, 20mA)",
                ),
            ),
            params=_params(_param("rail", default="3.3V", dim=VOLT)),
            body=Leaf(
                "QFN-32",
                "U",
                Literal("MagicMcu"),
                {Path.of("gnd"): "gnd", **{Path.parse(f"digital[{i}]"): f"digital{i}" for i in range(4)}},
            ),
            doc="Self-powered microcontroller with an internal ideal rail",
        ),
        BlockDefinition(
            "IndicatorLed",
            ports=_ports(
                _port(
                    "io",
                    PortKind.DIGITAL_SINK,
                    voltage_limits="range(0V, 5.5V)",
                    input_thresholds="range(0.8V, 2.0V)",
                ),
                _port("gnd", PortKind.VOLTAGE_SINK, voltage_limits=GROUND_LIMITS),
            ),
            params=_params(
                _param("current", default="5mA +- 1mA", dim=AMPERE),
                _param("forward_voltage", default="2V +- 0.2V", dim=VOLT),
                _param("resistance", dim=OHM),
            ),
            body=Generator(("link(io).voltage", "current", "forward_voltage"), indicator_led_generate),
            doc="LED with a series resistor sized from the drive voltage",
        ),
        BlockDefinition(
            "VoltageDivider",
            ports=_ports(
                PortDecl("input", PortKind.VOLTAGE_SINK),
                PortDecl("output", PortKind.VOLTAGE_SOURCE),
                _port("gnd", PortKind.VOLTAGE_SINK, voltage_limits=GROUND_LIMITS),
            ),
            params=_params(
                _param("ratio", dim=DIMENSIONLESS),
                _param("impedance", default="10kOhm", dim=OHM),
                _param("achieved_ratio", dim=DIMENSIONLESS),
            ),
            body=Generator(("link(input).voltage", "ratio", "impedance"), voltage_divider_generate),
            doc="Two-resistor divider sized for a ratio and Thevenin impedance",
        ),
        BlockDefinition(
            "PowerConverter",
            ports=_power_ports(),
            params=_converter_params(buck=False),
            abstract=True,
            doc="Any DC-DC converter",
        ),
        BlockDefinition(
            "BuckConverter",
            ports=_power_ports(),
            params=_converter_params(buck=True),
            parent="PowerConverter",
            abstract=True,
            default_refinement=BUCK_VARIANTS[0][0],
            doc="Step-down switching converter",
        ),
    ]
    for name, controller, part, footprint, rating in BUCK_VARIANTS:
        defs.append(_controller(controller, part, footprint))
        defs.append(
            BlockDefinition(
                name,
                ports=_power_ports(),
                params=_converter_params(buck=True),
                body=Generator(BUCK_DEPENDENCIES, make_buck_generate(controller, rating)),
                parent="BuckConverter",
                doc=f"Buck converter around the {part}",
            )
        )
    return defs


@lru_cache(maxsize=1)
def standard_library() -> LibraryRegistry:
    return LibraryRegistry(_definitions())

"""Native generator procedures and the context they run in.

A generator reads only its declared dependencies (already solved) and
describes the subtree it wants added: children, connections, values for its
own still-unproduced parameters and port parameters, and extra checks.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from boardhdl.errors import HdlError
from boardhdl.expr import Expr, Literal, ParamValue
from boardhdl.hdl.parser import parse_expr
from boardhdl.interval import Interval
from boardhdl.library.series import E12, E24, nearest_standard_value
from boardhdl.paths import Path
from boardhdl.units import AMPERE, DIMENSIONLESS, FARAD, HENRY, OHM, VOLT

# buck converter library constants
OUTPUT_RIPPLE_FRACTION = 0.01  # allowed output voltage ripple, fraction of Vout
INPUT_CAPACITANCE = 10e-6
# divider output may source at most this fraction of the divider's own current
DIVIDER_LOAD_FRACTION = 0.1
DIVIDER_MAX_INPUT = Interval(0.0, 50.0, VOLT)


@dataclass
class ChildSpec:
    name: str
    block: str
    args: dict[str, Expr]


@dataclass
class GeneratorContext:
    path: Path
    definition: str
    values: dict[str, ParamValue]
    children: list[ChildSpec] = field(default_factory=list)
    connects: list[tuple[Path, ...]] = field(default_factory=list)
    exports: list[tuple[Path, Path]] = field(default_factory=list)
    assignments: dict[str, ParamValue] = field(default_factory=dict)
    checks: list[tuple[str, Expr]] = field(default_factory=list)

    def param(self, name: str) -> ParamValue:
        if name not in self.values:
            raise HdlError("E_INTERNAL", f"generator {self.definition} read undeclared dependency {name!r}")
        return self.values[name]

    def link(self, port: str, name: str) -> ParamValue:
        return self.param(f"link({port}).{name}")

    def add_block(self, name: str, block: str, **args: ParamValue | Expr) -> None:
        self.children.append(
            ChildSpec(name, block, {k: v if _is_expr(v) else Literal(v) for k, v in args.items()})
        )

    def connect(self, *endpoints: str) -> None:
        self.connects.append(tuple(Path.parse(e) for e in endpoints))

    def export(self, outer: str, inner: str) -> None:
        self.exports.append((Path.parse(outer), Path.parse(inner)))

    def assign(self, key: str, value: ParamValue) -> None:
        self.assignments[key] = value

    def check(self, name: str, expr: str | Expr) -> None:
        self.checks.append((name, parse_expr(expr) if isinstance(expr, str) else expr))

    def infeasible(self, message: str) -> HdlError:
        return HdlError("E_GEN_INFEASIBLE", f"{self.definition}: {message}", str(self.path))


def _is_expr(value) -> bool:
    from boardhdl.expr import BinOp, Call, Neg, Ref, SumOverSinks

    return isinstance(value, (Literal, Ref, BinOp, Neg, Call, SumOverSinks))


def led_resistance(voltage: Interval, forward_voltage: Interval, current: Interval) -> float:
    """Series resistance for an indicator LED: nominal headroom over nominal current,
    rounded up to E24 so nominal current never exceeds the target."""
    headroom = voltage.mid - forward_voltage.mid
    if headroom <= 0 or current.mid <= 0:
        raise ValueError("no headroom")
    return nearest_standard_value(headroom / current.mid, E24, "round_up")


def indicator_led_generate(ctx: GeneratorContext) -> None:
    voltage = ctx.link("io", "voltage")
    vf = ctx.param("forward_voltage")
    current = ctx.param("current")
    try:
        r = led_resistance(voltage, vf, current)
    except ValueError:
        raise ctx.infeasible(
            f"drive voltage {voltage} leaves no headroom over forward voltage {vf} at current {current}"
        ) from None
    realized = Interval(max((voltage.lo - vf.hi) / r, 0.0), max((voltage.hi - vf.lo) / r, 0.0), AMPERE)

    ctx.add_block("D", "Led", forward_voltage=vf)
    ctx.add_block("R", "Resistor", resistance=Interval.point(r, OHM))
    ctx.connect("io", "D.anode")
    ctx.connect("D.cathode", "R.p1")
    ctx.connect("R.p2", "gnd")
    ctx.assign("resistance", Interval.point(r, OHM))
    ctx.assign("io.current_draw", realized)
    ctx.assign("gnd.current_draw", realized)
    ctx.check("led_current", "subset_of(io.current_draw, D.current_limits)")


def divider_resistances(ratio: Interval, impedance: Interval) -> tuple[float, float]:
    r, z = ratio.mid, impedance.mid
    if not 0 < r < 1:
        raise ValueError(f"ratio midpoint {r:g} outside (0, 1)")
    if z <= 0:
        raise ValueError(f"impedance midpoint {z:g} must be positive")
    top = nearest_standard_value(z / r, E24, "nearest")
    bottom = nearest_standard_value(z / (1 - r), E24, "nearest")
    return top, bottom


def voltage_divider_generate(ctx: GeneratorContext) -> None:
    vin = ctx.link("input", "voltage")
    ratio = ctx.param("ratio")
    impedance = ctx.param("impedance")
    try:
        top, bottom = divider_resistances(ratio, impedance)
    except ValueError as err:
        raise ctx.infeasible(str(err)) from None
    k = bottom / (top + bottom)
    total = Interval.point(top + bottom, OHM)
    vout = Interval(vin.lo * k, vin.hi * k, VOLT)
    input_current = vin / total

    ctx.add_block("top", "Resistor", resistance=Interval.point(top, OHM))
    ctx.add_block("bottom", "Resistor", resistance=Interval.point(bottom, OHM))
    ctx.connect("input", "top.p1")
    ctx.connect("top.p2", "bottom.p1", "output")
    ctx.connect("bottom.p2", "gnd")
    ctx.assign("achieved_ratio", Interval.point(k, DIMENSIONLESS))
    ctx.assign("output.voltage_out", vout)
    ctx.assign(
        "output.current_limits",
        Interval(0.0, DIVIDER_LOAD_FRACTION * max(vout.lo, 0.0) / (top + bottom), AMPERE),
    )
    ctx.assign("input.voltage_limits", DIVIDER_MAX_INPUT)
    ctx.assign("input.current_draw", input_current)
    ctx.assign("gnd.current_draw", input_current)
    ctx.check("ratio", "subset_of(achieved_ratio, ratio)")


@dataclass(frozen=True)
class BuckDesign:
    duty: float
    inductance_ideal: float
    inductance: float
    capacitance_ideal: float
    capacitance: float


def buck_design(vin: Interval, vout: Interval, iout: Interval, frequency: Interval, ripple: Interval) -> BuckDesign:
    """First-order continuous-conduction sizing of a buck power stage."""
    v_in, v_out, f, rho, i_max = vin.mid, vout.mid, frequency.mid, ripple.mid, iout.hi
    if v_out <= 0 or v_out >= v_in:
        raise ValueError(f"output {v_out:g} V needs 0 < Vout < Vin = {v_in:g} V")
    if f <= 0:
        raise ValueError(f"switching frequency {f:g} Hz must be positive")
    if not 0 < rho <= 1:
        raise ValueError(f"ripple ratio {rho:g} outside (0, 1]")
    if i_max <= 0:
        raise ValueError("maximum output current must be positive")
    l_ideal = v_out * (v_in - v_out) / (v_in * f * rho * i_max)
    c_ideal = rho * i_max / (8 * f * OUTPUT_RIPPLE_FRACTION * v_out)
    return BuckDesign(
        duty=v_out / v_in,
        inductance_ideal=l_ideal,
        inductance=nearest_standard_value(l_ideal, E12, "round_up"),
        capacitance_ideal=c_ideal,
        capacitance=nearest_standard_value(c_ideal, E12, "round_up"),
    )


def make_buck_generate(controller: str, input_rating: Interval):
    def buck_converter_generate(ctx: GeneratorContext) -> None:
        vin = ctx.link("pwr_in", "voltage")
        vout = ctx.param("output_voltage")
        iout = ctx.param("output_current")
        try:
            design = buck_design(vin, vout, iout, ctx.param("frequency"), ctx.param("ripple_ratio"))
        except ValueError as err:
            raise ctx.infeasible(str(err)) from None
        i_max = iout.hi
        input_current = Interval(0.0, i_max * vout.hi / vin.lo, AMPERE)

        ctx.add_block("ctrl", controller)
        ctx.add_block("ind", "Inductor", inductance=Interval.point(design.inductance, HENRY))
        ctx.add_block("cin", "Capacitor", capacitance=Interval.point(INPUT_CAPACITANCE, FARAD))
        ctx.add_block("cout", "Capacitor", capacitance=Interval.point(design.capacitance, FARAD))
        ctx.connect("pwr_in", "ctrl.vin", "cin.p1")
        ctx.connect("ctrl.sw", "ind.p1")
        ctx.connect("pwr_out", "ind.p2", "cout.p1", "ctrl.fb")
        ctx.connect("gnd", "ctrl.gnd", "cin.p2", "cout.p2")
        ctx.assign("inductance", Interval.point(design.inductance, HENRY))
        ctx.assign("capacitance", Interval.point(design.capacitance, FARAD))
        ctx.assign("duty", Interval.point(design.duty))
        ctx.assign("input_voltage", vin)
        ctx.assign("input_rating", input_rating)
        ctx.assign("pwr_out.voltage_out", vout)
        ctx.assign("pwr_out.current_limits", Interval(0.0, i_max, AMPERE))
        ctx.assign("pwr_in.voltage_limits", input_rating)
        ctx.assign("pwr_in.current_draw", input_current)
        ctx.assign("gnd.current_draw", input_current + Interval(0.0, i_max, AMPERE))
        ctx.check("input_rating", "subset_of(input_voltage, input_rating)")
        ctx.check("duty", "subset_of(duty, range(0, 1))")

    return buck_converter_generate

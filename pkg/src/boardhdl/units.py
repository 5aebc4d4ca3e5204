"""Physical dimensions over (meter, kilogram, second, ampere) and quantity literals."""

from __future__ import annotations

import math
import re
from dataclasses import dataclass

from boardhdl.errors import HdlError


@dataclass(frozen=True)
class Dimension:
    m: int = 0
    kg: int = 0
    s: int = 0
    a: int = 0

    @property
    def exponents(self) -> tuple[int, int, int, int]:
        return (self.m, self.kg, self.s, self.a)

    def __mul__(self, other: Dimension) -> Dimension:
        return Dimension(*(x + y for x, y in zip(self.exponents, other.exponents)))

    def __truediv__(self, other: Dimension) -> Dimension:
        return Dimension(*(x - y for x, y in zip(self.exponents, other.exponents)))

    def __str__(self) -> str:
        return unit_symbol(self)


DIMENSIONLESS = Dimension()
VOLT = Dimension(2, 1, -3, -1)
AMPERE = Dimension(0, 0, 0, 1)
OHM = Dimension(2, 1, -3, -2)
FARAD = Dimension(-2, -1, 4, 2)
HENRY = Dimension(2, 1, -2, -2)
HERTZ = Dimension(0, 0, -1, 0)
WATT = Dimension(2, 1, -3, 0)

UNITS: dict[str, Dimension] = {
    "V": VOLT,
    "A": AMPERE,
    "Ohm": OHM,
    "F": FARAD,
    "H": HENRY,
    "Hz": HERTZ,
    "W": WATT,
}
_SYMBOLS = {dim: name for name, dim in UNITS.items()}

SI_PREFIXES: dict[str, float] = {
    "p": 1e-12,
    "n": 1e-9,
    "u": 1e-6,
    "m": 1e-3,
    "k": 1e3,
    "M": 1e6,
    "G": 1e9,
}
_PREFIX_EXPONENTS = {"p": -12, "n": -9, "u": -6, "m": -3, "": 0, "k": 3, "M": 6, "G": 9}


def unit_symbol(dim: Dimension) -> str:
    if dim == DIMENSIONLESS:
        return ""
    if dim in _SYMBOLS:
        return _SYMBOLS[dim]
    parts = []
    for base, exp in zip(("m", "kg", "s", "A"), dim.exponents):
        if exp == 1:
            parts.append(base)
        elif exp:
            parts.append(f"{base}^{exp}")
    return " ".join(parts)


def dimension_combine(a: Dimension, b: Dimension, operator: str) -> Dimension:
    if operator in ("+", "-"):
        if a != b:
            raise HdlError(
                "E_DIM_MISMATCH",
                f"cannot apply {operator!r} to [{unit_symbol(a) or '1'}] and [{unit_symbol(b) or '1'}]",
            )
        return a
    if operator == "*":
        return a * b
    if operator == "/":
        return a / b
    raise ValueError(f"unknown operator {operator!r}")


def parse_unit(suffix: str) -> tuple[float, Dimension]:
    """Split ``mA``/``kOhm``/``Hz`` into (scale, dimension)."""
    if suffix in UNITS:
        return 1.0, UNITS[suffix]
    prefix, rest = suffix[:1], suffix[1:]
    if prefix in SI_PREFIXES and rest in UNITS:
        return SI_PREFIXES[prefix], UNITS[rest]
    raise HdlError("E_UNIT_UNKNOWN", f"unknown unit {suffix!r}")


def scale_number(number: str, suffix: str) -> tuple[float, Dimension]:
    """Apply a unit suffix to number text; decimal scaling avoids ``5 * 1e-3`` noise."""
    if not suffix:
        return float(number), DIMENSIONLESS
    _, dim = parse_unit(suffix)
    prefix = "" if suffix in UNITS else suffix[0]
    exp = _PREFIX_EXPONENTS[prefix]
    return (float(f"{number}e{exp}") if exp else float(number)), dim


_NUM = r"[0-9]+(?:\.[0-9]+)?(?:[eE][+-]?[0-9]+)?"
_QTY_RE = re.compile(
    rf"\s*(?P<sign>-)?(?P<num>{_NUM})\s*(?P<unit>[A-Za-z]+)?"
    rf"(?:\s*\+-\s*(?P<tol>{_NUM})\s*(?P<tunit>[A-Za-z]+|%)?)?\s*"
)


def quantity_parse(text: str):
    """Parse ``3.3V``, ``5mA +- 1mA`` or ``10kOhm +- 5%`` into an Interval."""
    from boardhdl.interval import Interval

    m = _QTY_RE.fullmatch(text)
    if m is None:
        raise HdlError("E_QTY_SYNTAX", f"malformed quantity {text!r}")
    center, dim = scale_number(m["num"], m["unit"] or "")
    if m["sign"]:
        center = -center
    if m["tol"] is None:
        return Interval(center, center, dim)
    if m["tunit"] == "%":
        tol = abs(center) * float(m["tol"]) / 100.0
    else:
        tol, tdim = scale_number(m["tol"], m["tunit"] or "")
        if tdim != dim:
            raise HdlError(
                "E_UNIT_MISMATCH",
                f"tolerance unit [{unit_symbol(tdim)}] differs from value unit [{unit_symbol(dim)}]",
            )
    return Interval(center - tol, center + tol, dim)


def format_si(value: float, digits: int = 4) -> str:
    """Render ``2.7e-6`` as ``2.7u`` and ``20000`` as ``20k`` (no unit letter)."""
    if value == 0 or not math.isfinite(value):
        return f"{value:g}"
    value = float(f"{value:.{digits}g}")
    exp3 = int(math.floor(math.log10(abs(value)) / 3)) * 3
    exp3 = max(-12, min(9, exp3))
    prefix = next(p for p, e in _PREFIX_EXPONENTS.items() if e == exp3)
    mantissa = value / 10.0**exp3
    return f"{mantissa:.{digits}g}" + prefix

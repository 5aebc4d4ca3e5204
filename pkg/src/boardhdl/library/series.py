"""E-series preferred values and snapping a target onto them."""

from __future__ import annotations

import math
from dataclasses import dataclass

from boardhdl.errors import HdlError
from boardhdl.interval import le


@dataclass(frozen=True)
class StandardSeries:
    name: str
    mantissas: tuple[int, ...]  # decade values x10, e.g. 27 for 2.7

    @property
    def decade(self) -> tuple[float, ...]:
        return tuple(m / 10 for m in self.mantissas)

    def value(self, mantissa: int, exponent: int) -> float:
        """``mantissa/10 * 10**exponent`` via decimal text, so 2.7u is exactly ``2.7e-06``."""
        return float(f"{mantissa}e{exponent - 1}")


E12 = StandardSeries("E12", (10, 12, 15, 18, 22, 27, 33, 39, 47, 56, 68, 82))
E24 = StandardSeries(
    "E24",
    (10, 11, 12, 13, 15, 16, 18, 20, 22, 24, 27, 30, 33, 36, 39, 43, 47, 51, 56, 62, 68, 75, 82, 91),
)
SERIES = {"E12": E12, "E24": E24}


def _bracket(target: float, series: StandardSeries) -> tuple[float, float]:
    decade = math.floor(math.log10(target))
    candidates = sorted(
        series.value(m, k) for k in (decade - 1, decade, decade + 1, decade + 2) for m in series.mantissas
    )
    up = min(c for c in candidates if le(target, c))
    down = max(c for c in candidates if le(c, target))
    return down, up


def nearest_standard_value(target: float, series: StandardSeries, mode: str = "nearest") -> float:
    if not (math.isfinite(target) and target > 0):
        raise HdlError("E_DOMAIN", f"cannot snap {target!r} to {series.name}: target must be finite and > 0")
    down, up = _bracket(target, series)
    if mode == "round_up":
        return up
    if mode == "round_down":
        return down
    if mode != "nearest":
        raise ValueError(f"unknown rounding mode {mode!r}")
    if down == up:
        return up
    return down if (target - down) / target <= (up - target) / target else up

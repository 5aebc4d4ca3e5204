"""Dimensioned closed intervals and their arithmetic.

Magnitudes are plain floats; no outward rounding is done. Comparisons that
decide check outcomes go through :func:`le`, which allows a relative slack of
``REL_TOL`` (absolute ``ABS_TOL`` near zero).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from boardhdl.errors import HdlError
from boardhdl.units import DIMENSIONLESS, Dimension, dimension_combine, format_si, unit_symbol

REL_TOL = 1e-9
ABS_TOL = 1e-12


def le(a: float, b: float) -> bool:
    """``a <= b`` up to the documented comparison tolerance."""
    return a <= b + max(REL_TOL * max(abs(a), abs(b)), ABS_TOL)


def close(a: float, b: float) -> bool:
    return le(a, b) and le(b, a)


@dataclass(frozen=True)
class Interval:
    lo: float
    hi: float
    dim: Dimension = DIMENSIONLESS

    def __post_init__(self):
        if math.isnan(self.lo) or math.isnan(self.hi):
            raise HdlError("E_DOMAIN", "interval bound is NaN")
        if self.lo > self.hi:
            raise HdlError("E_DOMAIN", f"interval lower bound {self.lo} exceeds upper bound {self.hi}")

    @classmethod
    def point(cls, value: float, dim: Dimension = DIMENSIONLESS) -> Interval:
        return cls(value, value, dim)

    @property
    def mid(self) -> float:
        return (self.lo + self.hi) / 2

    @property
    def is_point(self) -> bool:
        return self.lo == self.hi

    def __str__(self) -> str:
        unit = unit_symbol(self.dim)
        suffix = f" {unit}" if unit else ""
        return f"[{format_si(self.lo)}, {format_si(self.hi)}]{suffix}"

    def __add__(self, other: Interval) -> Interval:
        return interval_arith("+", self, other)

    def __sub__(self, other: Interval) -> Interval:
        return interval_arith("-", self, other)

    def __mul__(self, other: Interval) -> Interval:
        return interval_arith("*", self, other)

    def __truediv__(self, other: Interval) -> Interval:
        return interval_arith("/", self, other)

    def __neg__(self) -> Interval:
        return Interval(-self.hi, -self.lo, self.dim)


@dataclass(frozen=True)
class Empty:
    """The empty interval; only ever produced by :func:`intersect`."""

    dim: Dimension = DIMENSIONLESS

    def __str__(self) -> str:
        unit = unit_symbol(self.dim)
        return f"empty{' ' + unit if unit else ''}"


IntervalLike = Interval | Empty


def interval_arith(operator: str, a: IntervalLike, b: IntervalLike) -> IntervalLike:
    dim = dimension_combine(a.dim, b.dim, operator)
    if isinstance(a, Empty) or isinstance(b, Empty):
        return Empty(dim)
    if operator == "+":
        return Interval(a.lo + b.lo, a.hi + b.hi, dim)
    if operator == "-":
        return Interval(a.lo - b.hi, a.hi - b.lo, dim)
    if operator == "*":
        corners = (a.lo * b.lo, a.lo * b.hi, a.hi * b.lo, a.hi * b.hi)
    elif operator == "/":
        if b.lo <= 0.0 <= b.hi:
            raise HdlError("E_DIV_ZERO", f"division by an interval containing zero: {b}")
        # direct quotients rather than multiplying by a rounded reciprocal
        corners = (a.lo / b.lo, a.lo / b.hi, a.hi / b.lo, a.hi / b.hi)
    else:
        raise ValueError(f"unknown operator {operator!r}")
    return Interval(min(corners), max(corners), dim)


def _same_dim(a: IntervalLike, b: IntervalLike, op: str) -> Dimension:
    if a.dim != b.dim:
        raise HdlError(
            "E_DIM_MISMATCH",
            f"{op} needs equal dimensions, got [{unit_symbol(a.dim) or '1'}] and [{unit_symbol(b.dim) or '1'}]",
        )
    return a.dim


class EmptyOperand(HdlError):
    def __init__(self, op: str):
        super().__init__("E_EMPTY", f"{op} applied to an empty interval")


def contains(a: IntervalLike, b: IntervalLike) -> bool:
    _same_dim(a, b, "contains")
    if isinstance(a, Empty) or isinstance(b, Empty):
        raise EmptyOperand("contains")
    return le(a.lo, b.lo) and le(b.hi, a.hi)


def subset_of(a: IntervalLike, b: IntervalLike) -> bool:
    return contains(b, a)


def intersect(a: IntervalLike, b: IntervalLike) -> IntervalLike:
    dim = _same_dim(a, b, "intersect")
    if isinstance(a, Empty) or isinstance(b, Empty):
        return Empty(dim)
    lo, hi = max(a.lo, b.lo), min(a.hi, b.hi)
    if lo > hi:
        return Empty(dim)
    return Interval(lo, hi, dim)


def hull(a: IntervalLike, b: IntervalLike) -> IntervalLike:
    dim = _same_dim(a, b, "hull")
    if isinstance(a, Empty):
        return b
    if isinstance(b, Empty):
        return a
    return Interval(min(a.lo, b.lo), max(a.hi, b.hi), dim)


def interval_min(a: IntervalLike, b: IntervalLike) -> IntervalLike:
    dim = _same_dim(a, b, "min")
    if isinstance(a, Empty) or isinstance(b, Empty):
        return Empty(dim)
    return Interval(min(a.lo, b.lo), min(a.hi, b.hi), dim)


def interval_max(a: IntervalLike, b: IntervalLike) -> IntervalLike:
    dim = _same_dim(a, b, "max")
    if isinstance(a, Empty) or isinstance(b, Empty):
        return Empty(dim)
    return Interval(max(a.lo, b.lo), max(a.hi, b.hi), dim)


def interval_range(lo: IntervalLike, hi: IntervalLike) -> Interval:
    """``range(a, b)`` spans from the bottom of ``a`` to the top of ``b``."""
    dim = _same_dim(lo, hi, "range")
    if isinstance(lo, Empty) or isinstance(hi, Empty):
        raise EmptyOperand("range")
    if lo.lo > hi.hi:
        raise HdlError("E_DOMAIN", f"range lower end {lo.lo} exceeds upper end {hi.hi}")
    return Interval(lo.lo, hi.hi, dim)


def interval_set(op: str, a: IntervalLike, b: IntervalLike):
    return {"contains": contains, "subset_of": subset_of, "intersect": intersect, "hull": hull}[op](a, b)

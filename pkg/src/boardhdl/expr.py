"""Parameter expressions: a small pure language over intervals and scalars."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterator, Union

from boardhdl import interval as iv
from boardhdl.errors import HdlError, SourceLocation
from boardhdl.interval import Empty, Interval
from boardhdl.paths import Path
from boardhdl.units import DIMENSIONLESS, unit_symbol

ParamValue = Union[Interval, Empty, bool, int, str]
PARAM_TYPES = ("interval", "bool", "int", "text")


def value_type(value: ParamValue) -> str:
    if isinstance(value, bool):
        return "bool"
    if isinstance(value, int):
        return "int"
    if isinstance(value, str):
        return "text"
    if isinstance(value, (Interval, Empty)):
        return "interval"
    raise TypeError(f"not a parameter value: {value!r}")


def format_value(value: ParamValue) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, str):
        return '"' + value.replace("\\", "\\\\").replace('"', '\\"') + '"'
    return str(value)


def value_to_json(value: ParamValue | None):
    if value is None or isinstance(value, (bool, int, str)):
        return value
    unit = unit_symbol(value.dim)
    if isinstance(value, Empty):
        return {"empty": True, "unit": unit}
    return {"lo": value.lo, "hi": value.hi, "unit": unit}


@dataclass(frozen=True)
class Literal:
    value: ParamValue
    loc: SourceLocation | None = field(default=None, compare=False)


@dataclass(frozen=True)
class Ref:
    path: Path
    loc: SourceLocation | None = field(default=None, compare=False)


@dataclass(frozen=True)
class BinOp:
    op: str
    left: Expr
    right: Expr
    loc: SourceLocation | None = field(default=None, compare=False)


@dataclass(frozen=True)
class Neg:
    operand: Expr
    loc: SourceLocation | None = field(default=None, compare=False)


@dataclass(frozen=True)
class Call:
    fn: str
    args: tuple[Expr, ...]
    loc: SourceLocation | None = field(default=None, compare=False)


@dataclass(frozen=True)
class SumOverSinks:
    """Sum of ``param`` over the sink endpoints of the link the expression belongs to."""

    param: str
    loc: SourceLocation | None = field(default=None, compare=False)


Expr = Union[Literal, Ref, BinOp, Neg, Call, SumOverSinks]

FUNCTIONS = {
    "min": iv.interval_min,
    "max": iv.interval_max,
    "hull": iv.hull,
    "intersect": iv.intersect,
    "range": iv.interval_range,
    "subset_of": iv.subset_of,
    "contains": iv.contains,
}
BOOLEAN_FUNCTIONS = {"subset_of", "contains"}


def refs(expr: Expr) -> Iterator[Ref]:
    if isinstance(expr, Ref):
        yield expr
    elif isinstance(expr, BinOp):
        yield from refs(expr.left)
        yield from refs(expr.right)
    elif isinstance(expr, Neg):
        yield from refs(expr.operand)
    elif isinstance(expr, Call):
        for arg in expr.args:
            yield from refs(arg)


def has_sum(expr: Expr) -> bool:
    if isinstance(expr, SumOverSinks):
        return True
    if isinstance(expr, BinOp):
        return has_sum(expr.left) or has_sum(expr.right)
    if isinstance(expr, Neg):
        return has_sum(expr.operand)
    if isinstance(expr, Call):
        return any(has_sum(a) for a in expr.args)
    return False


def render(expr: Expr, ref_text: Callable[[Path], str] = str) -> str:
    if isinstance(expr, Literal):
        return format_value(expr.value)
    if isinstance(expr, Ref):
        return ref_text(expr.path)
    if isinstance(expr, BinOp):
        return f"({render(expr.left, ref_text)} {expr.op} {render(expr.right, ref_text)})"
    if isinstance(expr, Neg):
        return f"-{render(expr.operand, ref_text)}"
    if isinstance(expr, Call):
        return f"{expr.fn}({', '.join(render(a, ref_text) for a in expr.args)})"
    if isinstance(expr, SumOverSinks):
        return f"sum_over_sinks({expr.param})"
    raise TypeError(expr)


def _as_interval(value: ParamValue, what: str):
    if isinstance(value, (Interval, Empty)):
        return value
    if isinstance(value, int) and not isinstance(value, bool):
        return Interval.point(float(value))
    raise HdlError("E_ARG_TYPE", f"{what} expects an interval, got {value_type(value)}")


def eval_expr(
    expr: Expr,
    lookup: Callable[[Path], ParamValue],
    sinks: Callable[[str], list[ParamValue]] | None = None,
) -> ParamValue:
    """Evaluate bottom-up; ``lookup`` resolves references and raises if unsolved."""
    try:
        return _eval(expr, lookup, sinks)
    except HdlError as err:
        raise err.with_location(expr.loc) if expr.loc is not None else err


def _eval(expr, lookup, sinks):
    if isinstance(expr, Literal):
        return expr.value
    if isinstance(expr, Ref):
        return lookup(expr.path)
    if isinstance(expr, Neg):
        value = _eval(expr.operand, lookup, sinks)
        if isinstance(value, int) and not isinstance(value, bool):
            return -value
        value = _as_interval(value, "negation")
        return value if isinstance(value, Empty) else -value
    if isinstance(expr, BinOp):
        left = _eval(expr.left, lookup, sinks)
        right = _eval(expr.right, lookup, sinks)
        if (
            type(left) is int and type(right) is int and expr.op in "+-*"
        ):
            return {"+": left + right, "-": left - right, "*": left * right}[expr.op]
        return iv.interval_arith(
            expr.op, _as_interval(left, expr.op), _as_interval(right, expr.op)
        )
    if isinstance(expr, Call):
        fn = FUNCTIONS.get(expr.fn)
        if fn is None:
            raise HdlError("E_PARSE", f"unknown function {expr.fn!r}")
        if len(expr.args) != 2:
            raise HdlError("E_ARG_TYPE", f"{expr.fn} takes 2 arguments, got {len(expr.args)}")
        a, b = (_as_interval(_eval(arg, lookup, sinks), expr.fn) for arg in expr.args)
        return fn(a, b)
    if isinstance(expr, SumOverSinks):
        if sinks is None:
            raise HdlError("E_ARG_TYPE", "sum_over_sinks is only meaningful on a link")
        terms = [_as_interval(v, "sum_over_sinks") for v in sinks(expr.param)]
        if not terms:
            return Interval.point(0.0)
        total = terms[0]
        for term in terms[1:]:
            total = iv.interval_arith("+", total, term)
        return total
    raise TypeError(expr)


def infer_type(expr: Expr, ref_type: Callable[[Path], str | None]) -> str | None:
    """Static value type of ``expr``, or None where a reference cannot be typed yet."""
    if isinstance(expr, Literal):
        return value_type(expr.value)
    if isinstance(expr, Ref):
        return ref_type(expr.path)
    if isinstance(expr, Neg):
        return infer_type(expr.operand, ref_type)
    if isinstance(expr, BinOp):
        left = infer_type(expr.left, ref_type)
        right = infer_type(expr.right, ref_type)
        for side in (left, right):
            if side in ("bool", "text"):
                raise HdlError("E_ARG_TYPE", f"operator {expr.op!r} cannot take a {side} operand", expr.loc)
        if left == right == "int" and expr.op != "/":
            return "int"
        return None if None in (left, right) else "interval"
    if isinstance(expr, Call):
        return "bool" if expr.fn in BOOLEAN_FUNCTIONS else "interval"
    if isinstance(expr, SumOverSinks):
        return "interval"
    raise TypeError(expr)


def compatible(declared: str, actual: str | None) -> bool:
    return actual is None or actual == declared or (declared == "interval" and actual == "int")


def coerce(declared: str, value: ParamValue) -> ParamValue:
    if declared == "interval" and type(value) is int:
        return Interval.point(float(value), DIMENSIONLESS)
    return value


def q(text: str) -> Literal:
    """Quantity literal shorthand for library code."""
    from boardhdl.units import quantity_parse

    return Literal(quantity_parse(text))


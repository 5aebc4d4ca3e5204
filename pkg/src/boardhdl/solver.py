"""Single-assignment dataflow propagation of parameters to a fixpoint."""

from __future__ import annotations

import logging
import random
from collections import deque
from dataclasses import dataclass, field
from graphlib import CycleError, TopologicalSorter

from boardhdl.design import Design, Producer
from boardhdl.errors import HdlError, SourceLocation
from boardhdl.expr import (
    BinOp,
    Call,
    Expr,
    Neg,
    ParamValue,
    Ref,
    SumOverSinks,
    coerce,
    eval_expr,
    refs,
    value_type,
)
from boardhdl.interval import Empty, Interval, interval_arith, interval_set  # noqa: F401  (re-exported)
from boardhdl.model import Link, LinkKind
from boardhdl.paths import Path

logger = logging.getLogger(__name__)


def link_rules(link: Link) -> list[tuple[str, Expr]]:
    """Propagation rules of a link: its voltage comes from the driver, its
    current draw is the sum over the sinks."""
    if link.kind is LinkKind.PASSIVE_NET:
        return []
    return [
        (link.param_key("voltage"), Ref(link.driver / "voltage_out")),
        (link.param_key("current_draw"), SumOverSinks("current_draw")),
    ]


def _sum_params(expr: Expr) -> list[str]:
    if isinstance(expr, SumOverSinks):
        return [expr.param]
    if isinstance(expr, BinOp):
        return _sum_params(expr.left) + _sum_params(expr.right)
    if isinstance(expr, Neg):
        return _sum_params(expr.operand)
    if isinstance(expr, Call):
        return [p for a in expr.args for p in _sum_params(a)]
    return []


def producer_dependencies(design: Design, producer: Producer) -> list[str]:
    deps = [design.resolve_key(producer.scope, r.path) for r in refs(producer.expr)]
    if producer.link is not None:
        for param in _sum_params(producer.expr):
            deps.extend(f"{design.canonical(s)}.{param}" for s in producer.link.sinks)
    return deps


@dataclass
class SolveReport:
    solved: int = 0
    unsolved: list[str] = field(default_factory=list)


def evaluate(design: Design, producer: Producer) -> ParamValue:
    def lookup(path: Path) -> ParamValue:
        key = design.resolve_key(producer.scope, path)
        if key not in design.bindings:
            raise HdlError("E_UNSOLVED_REF", f"{key} is not solved yet")
        return design.bindings[key]

    def sinks(param: str) -> list[ParamValue]:
        return [lookup(s / param) for s in producer.link.sinks]

    return eval_expr(producer.expr, lookup, sinks if producer.link is not None else None)


def _bind(design: Design, producer: Producer, value: ParamValue) -> None:
    key = producer.key
    declared = design.declared.get(key)
    if declared is not None:
        type_, dim = declared
        value = coerce(type_, value)
        if value_type(value) != type_:
            raise HdlError("E_ARG_TYPE", f"{key} is declared {type_} but got {value_type(value)}", key)
        if dim is not None and isinstance(value, (Interval, Empty)) and value.dim != dim:
            from boardhdl.units import unit_symbol

            raise HdlError(
                "E_DIM_MISMATCH",
                f"{key} expects [{unit_symbol(dim) or '1'}] but got [{unit_symbol(value.dim) or '1'}]",
                key,
            )
    design.bindings[key] = value


def solve(design: Design, rng: random.Random | None = None) -> SolveReport:
    """Evaluate every producer whose dependencies are solved until nothing changes.

    Unsolved parameters are tolerated (generators may not have run yet) and
    returned in the report; a dependency cycle among them is an error.
    ``rng`` shuffles the evaluation order, which must not affect the result.
    """
    pending = {k: p for k, p in design.producers.items() if k not in design.bindings}
    deps = {k: producer_dependencies(design, p) for k, p in pending.items()}
    waiting: dict[str, int] = {}
    dependents: dict[str, list[str]] = {}
    for key, ds in deps.items():
        open_deps = {d for d in ds if d not in design.bindings}
        waiting[key] = len(open_deps)
        for d in open_deps:
            dependents.setdefault(d, []).append(key)

    ready = [k for k, n in waiting.items() if n == 0]
    if rng is not None:
        rng.shuffle(ready)
    queue = deque(ready)
    solved = 0
    while queue:
        if rng is not None and len(queue) > 1:
            queue.rotate(-rng.randrange(len(queue)))
        key = queue.popleft()
        producer = pending[key]
        try:
            value = evaluate(design, producer)
        except HdlError as err:
            loc = err.location if isinstance(err.location, SourceLocation) else key
            raise HdlError(err.code, f"while computing {key}: {err.message}", loc) from err
        _bind(design, producer, value)
        solved += 1
        for dependent in dependents.get(key, ()):
            waiting[dependent] -= 1
            if waiting[dependent] == 0:
                queue.append(dependent)

    unsolved = sorted(k for k in pending if k not in design.bindings)
    if unsolved:
        graph = {k: [d for d in deps[k] if d in pending and d not in design.bindings] for k in unsolved}
        try:
            tuple(TopologicalSorter(graph).static_order())
        except CycleError as err:
            cycle = list(dict.fromkeys(err.args[1]))
            raise HdlError("E_PARAM_CYCLE", f"parameters depend on each other: {' -> '.join(cycle)}", cycle[0]) from None
    logger.debug("solved %d parameters, %d unsolved", solved, len(unsolved))
    return SolveReport(solved, unsolved)

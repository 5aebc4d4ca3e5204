"""Evaluation of link rule checks and user/generator assertions into a report."""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from boardhdl.design import CheckSpec, Design
from boardhdl.errors import HdlError
from boardhdl.expr import Call, ParamValue, Ref, eval_expr, refs, render, value_to_json
from boardhdl.interval import Empty
from boardhdl.model import Link, LinkKind
from boardhdl.paths import Path

PASS, FAIL, UNRESOLVED = "pass", "fail", "unresolved"


@dataclass(frozen=True)
class CheckResult:
    id: str
    kind: str
    status: str
    expr: str
    observed: dict[str, ParamValue | None]

    def to_json(self) -> dict:
        return {
            "id": self.id,
            "kind": self.kind,
            "status": self.status,
            "expr": self.expr,
            "observed": {k: value_to_json(v) for k, v in self.observed.items()},
        }


@dataclass
class CheckReport:
    results: list[CheckResult] = field(default_factory=list)

    def count(self, status: str) -> int:
        return sum(r.status == status for r in self.results)

    @property
    def summary(self) -> dict[str, int]:
        return {"pass": self.count(PASS), "fail": self.count(FAIL), "unresolved": self.count(UNRESOLVED)}

    def by_id(self, check_id: str) -> CheckResult:
        return next(r for r in self.results if r.id == check_id)

    def to_json(self) -> str:
        doc = {"summary": self.summary, "checks": [r.to_json() for r in self.results]}
        return json.dumps(doc, indent=2) + "\n"

    def summary_line(self) -> str:
        s = self.summary
        return f"checks: {s['pass']} pass, {s['fail']} fail, {s['unresolved']} unresolved"


def _subset(a: Path, b: Path) -> Call:
    return Call("subset_of", (Ref(a), Ref(b)))


def emit_link_checks(link: Link) -> list[CheckSpec]:
    """Voltage-within-limits per sink, total draw within the driver's limit and,
    for digital links, driver output levels covering each sink's input levels."""
    if link.kind is LinkKind.PASSIVE_NET:
        return []
    root = Path.root()
    voltage, current = link.id / "voltage", link.id / "current_draw"
    out = [
        CheckSpec(f"{link.id}.voltage@{sink}", "link-voltage", root, _subset(voltage, sink / "voltage_limits"))
        for sink in link.sinks
    ]
    out.append(CheckSpec(f"{link.id}.current", "link-current", root, _subset(current, link.driver / "current_limits")))
    if link.kind is LinkKind.DIGITAL:
        for sink in link.sinks:
            expr = Call("contains", (Ref(link.driver / "output_thresholds"), Ref(sink / "input_thresholds")))
            out.append(CheckSpec(f"{link.id}.threshold@{sink}", "threshold", root, expr))
    return out


def evaluate_check(design: Design, spec: CheckSpec) -> CheckResult:
    observed: dict[str, ParamValue | None] = {}
    for ref in refs(spec.expr):
        key = design.resolve_key(spec.scope, ref.path)
        observed[key] = design.bindings.get(key)
    text = render(spec.expr, lambda p: design.resolve_key(spec.scope, p))
    if any(v is None or isinstance(v, Empty) for v in observed.values()):
        return CheckResult(spec.id, spec.kind, UNRESOLVED, text, observed)
    try:
        outcome = eval_expr(spec.expr, lambda p: design.bindings[design.resolve_key(spec.scope, p)])
    except HdlError as err:
        if err.code == "E_EMPTY":
            return CheckResult(spec.id, spec.kind, UNRESOLVED, text, observed)
        raise err.with_location(spec.id)
    if not isinstance(outcome, bool):
        raise HdlError("E_ARG_TYPE", f"check {spec.id} evaluates to a non-boolean value", spec.id)
    return CheckResult(spec.id, spec.kind, PASS if outcome else FAIL, text, observed)


def all_check_specs(design: Design) -> list[CheckSpec]:
    specs = [c for link in design.links for c in emit_link_checks(link)]
    return specs + list(design.checks)


def run_checks(design: Design) -> CheckReport:
    results = [evaluate_check(design, spec) for spec in all_check_specs(design)]
    results.sort(key=lambda r: r.id)
    return CheckReport(results)

from __future__ import annotations

from pathlib import Path

import pytest

from boardhdl.compiler import compile_source
from boardhdl.library.generators import GeneratorContext
from boardhdl.library.registry import LibraryRegistry
from boardhdl.library.stdlib import standard_library
from boardhdl.model import BlockDefinition, Generator, ParamDecl, PortDecl, PortKind
from boardhdl.hdl.parser import parse_expr
from boardhdl.interval import Interval
from boardhdl.units import AMPERE, VOLT

DESIGNS = Path(__file__).resolve().parent.parent / "designs"


@pytest.fixture(scope="session")
def designs_dir() -> Path:
    return DESIGNS


@pytest.fixture(scope="session")
def blinky_source() -> str:
    return (DESIGNS / "blinky.bhdl").read_text()


@pytest.fixture(scope="session")
def library() -> LibraryRegistry:
    return standard_library()


def compile_text(source: str, top: str, **kwargs):
    return compile_source(source, top, **kwargs)


def _relay(ctx: GeneratorContext) -> None:
    v = ctx.link("inp", "voltage")
    ctx.assign("out.voltage_out", v)
    ctx.assign("out.current_limits", Interval(0.0, 1.0, AMPERE))


def _chain(ctx: GeneratorContext) -> None:
    depth = ctx.param("depth")
    if depth > 0:
        ctx.add_block("next", "Chain", depth=depth - 1)


def scheduler_library() -> LibraryRegistry:
    """Standard library plus adversarial generators for scheduler tests."""
    relay = BlockDefinition(
        "Relay",
        ports={
            "inp": PortDecl(
                "inp", PortKind.VOLTAGE_SINK, None,
                {"voltage_limits": parse_expr("range(0V, 50V)"), "current_draw": parse_expr("range(0A, 1mA)")},
            ),
            "out": PortDecl("out", PortKind.VOLTAGE_SOURCE),
        },
        body=Generator(("link(inp).voltage",), _relay),
    )
    chain = BlockDefinition(
        "Chain",
        params={"depth": ParamDecl("depth", "int")},
        body=Generator(("depth",), _chain),
    )
    return standard_library().extended([relay, chain])


def pytest_terminal_summary(terminalreporter):
    reports = [
        r
        for key in ("passed", "failed")
        for r in terminalreporter.stats.get(key, [])
        if r.when == "call" and "test_acceptance" in r.nodeid
    ]
    if not reports:
        return
    terminalreporter.section("acceptance criteria")
    for r in sorted(reports, key=lambda r: r.nodeid):
        name = r.nodeid.split("::")[-1]
        terminalreporter.write_line(f"{'PASS' if r.passed else 'FAIL'}  {name}")

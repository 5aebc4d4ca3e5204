"""The whole pipeline: parse, lower, elaborate, solve, check."""

from __future__ import annotations

from dataclasses import dataclass

from boardhdl.checks import CheckReport, run_checks
from boardhdl.design import Design
from boardhdl.elaborate import DEFAULT_MAX_ITERATIONS, RefinementConfig, elaborate
from boardhdl.hdl.lexer import tokenize
from boardhdl.hdl.lower import lower
from boardhdl.hdl.parser import parse_design
from boardhdl.library.registry import LibraryRegistry
from boardhdl.library.stdlib import standard_library


@dataclass
class Compilation:
    design: Design
    report: CheckReport
    library: LibraryRegistry


def build_library(source: str, base: LibraryRegistry | None = None) -> LibraryRegistry:
    base = base or standard_library()
    return base.extended(lower(parse_design(tokenize(source)), base))


def compile_source(
    source: str,
    top: str,
    cfg: RefinementConfig | None = None,
    max_iterations: int = DEFAULT_MAX_ITERATIONS,
    library: LibraryRegistry | None = None,
) -> Compilation:
    lib = build_library(source, library)
    design = elaborate(top, cfg, max_iterations, lib)
    return Compilation(design, run_checks(design), lib)

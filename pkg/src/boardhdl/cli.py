"""Batch command-line driver: ``boardhdl compile|check|libdoc``."""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
import tempfile
from dataclasses import dataclass

from boardhdl.checks import CheckReport
from boardhdl.compiler import compile_source
from boardhdl.dot import emit_dot
from boardhdl.elaborate import DEFAULT_MAX_ITERATIONS, RefinementConfig
from boardhdl.errors import ConfigError, HdlError
from boardhdl.library.registry import ROOT_NAME, LibraryRegistry
from boardhdl.library.stdlib import standard_library
from boardhdl.netlist import build_netlist, emit_json, emit_kicad
from boardhdl.paths import Path

logger = logging.getLogger("boardhdl")

EXIT_OK, EXIT_CHECK_FAILED, EXIT_COMPILE_ERROR, EXIT_USAGE = 0, 1, 2, 3


@dataclass
class CompileOptions:
    source: str
    top: str
    refinements: str | None = None
    netlist: str | None = None
    json: str | None = None
    dot: str | None = None
    report: str | None = None
    max_iterations: int = DEFAULT_MAX_ITERATIONS
    dot_depth: int = 0


def load_refinements(file: str, library: LibraryRegistry | None = None) -> RefinementConfig:
    library = library or standard_library()
    try:
        with open(file, encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as err:
        raise ConfigError("E_CONFIG_SYNTAX", f"cannot read refinements: {err.strerror}", file) from None
    except json.JSONDecodeError as err:
        raise ConfigError("E_CONFIG_SYNTAX", f"invalid JSON: {err.msg} (line {err.lineno})", file) from None
    return refinements_from_json(doc, library, file)


def refinements_from_json(doc, library: LibraryRegistry, where: str = "refinements") -> RefinementConfig:
    if not isinstance(doc, dict) or set(doc) - {"path", "class"}:
        raise ConfigError("E_CONFIG_SYNTAX", 'expected an object with optional "path" and "class" maps', where)
    maps = {}
    for section in ("path", "class"):
        entries = doc.get(section, {})
        if not isinstance(entries, dict) or not all(isinstance(v, str) for v in entries.values()):
            raise ConfigError("E_CONFIG_SYNTAX", f'"{section}" must map strings to block names', where)
        for target in entries.values():
            if target not in library:
                raise ConfigError("E_UNKNOWN_BLOCK", f"unknown block {target!r} in refinements", where)
        maps[section] = entries
    by_path = {}
    for key, target in maps["path"].items():
        try:
            by_path[Path.parse(key)] = target
        except HdlError as err:
            raise ConfigError("E_CONFIG_SYNTAX", err.message, where) from None
    for key in maps["class"]:
        if key not in library:
            raise ConfigError("E_UNKNOWN_BLOCK", f"unknown block {key!r} in refinements", where)
    return RefinementConfig(by_path, dict(maps["class"]))


def libdoc(library: LibraryRegistry | None = None) -> str:
    library = library or standard_library()
    lines = []
    for name in library.names():
        d = library.lookup(name)
        ports = ', '.join(p.name if p.size is None else f'{p.name}[{p.size}]' for p in d.ports.values())
        lines.append(f"{name} {d.kind} {d.parent or ROOT_NAME} ports: {ports}")
    return "\n".join(lines) + "\n"


def write_atomic(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".boardhdl-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def compile(opts: CompileOptions, emit: bool = True, out=None, err=None) -> int:  # noqa: A001
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        with open(opts.source, encoding="utf-8") as fh:
            source = fh.read()
    except OSError as exc:
        print(f"error[E_CONFIG_SYNTAX] at {opts.source}: cannot read source: {exc.strerror}", file=err)
        return EXIT_USAGE
    try:
        cfg = load_refinements(opts.refinements) if opts.refinements else RefinementConfig()
        result = compile_source(source, opts.top, cfg, opts.max_iterations)
        outputs: dict[str, str] = {}
        if opts.report:
            outputs[opts.report] = result.report.to_json()
        if emit and (opts.netlist or opts.json):
            built = build_netlist(result.design)
            for pin in built.dangling:
                print(f"warning[E_DANGLING] at {pin}: pin is not connected to anything", file=err)
            if opts.netlist:
                outputs[opts.netlist] = emit_kicad(built.netlist)
            if opts.json:
                outputs[opts.json] = emit_json(built.netlist)
        if emit and opts.dot:
            outputs[opts.dot] = emit_dot(result.design, opts.dot_depth)
    except ConfigError as exc:
        print(exc.render(opts.refinements), file=err)
        return EXIT_USAGE
    except HdlError as exc:
        print(exc.render(opts.source), file=err)
        return EXIT_COMPILE_ERROR

    for path, text in outputs.items():
        write_atomic(path, text)
    report: CheckReport = result.report
    for r in report.results:
        if r.status != "pass":
            print(f"{r.status}: {r.id}: {r.expr}", file=err)
    print(report.summary_line(), file=out)
    return EXIT_CHECK_FAILED if report.summary["fail"] else EXIT_OK


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"error[E_USAGE]: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _add_compile_args(p: argparse.ArgumentParser, emitters: bool) -> None:
    p.add_argument("source", help=".bhdl design file")
    p.add_argument("--top", required=True, help="name of the top-level block")
    p.add_argument("--refinements", help="JSON refinement file")
    p.add_argument("--report", help="write the check report (JSON) here")
    p.add_argument("--max-iterations", type=int, default=DEFAULT_MAX_ITERATIONS)
    if emitters:
        p.add_argument("--netlist", help="write the KiCad-style netlist here")
        p.add_argument("--json", help="write the JSON netlist here")
        p.add_argument("--dot", help="write the Graphviz block diagram here")
        p.add_argument("--dot-depth", type=int, default=0, help="cluster depth, 0 = unlimited")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="boardhdl", description="Compile board-level HDL designs to netlists.")
    parser.add_argument("-v", "--verbose", action="count", default=0)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    _add_compile_args(sub.add_parser("compile", help="compile, check and emit outputs"), emitters=True)
    _add_compile_args(sub.add_parser("check", help="compile and run checks without emitting netlists"), emitters=False)
    sub.add_parser("libdoc", help="list the built-in library")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.WARNING - 10 * min(args.verbose, 2), format="%(levelname)s %(name)s: %(message)s"
    )
    if args.command == "libdoc":
        sys.stdout.write(libdoc())
        return EXIT_OK
    if args.max_iterations < 1 or getattr(args, "dot_depth", 0) < 0:
        print("error[E_USAGE]: --max-iterations must be >= 1 and --dot-depth >= 0", file=sys.stderr)
        return EXIT_USAGE
    opts = CompileOptions(
        source=args.source,
        top=args.top,
        refinements=args.refinements,
        netlist=getattr(args, "netlist", None),
        json=getattr(args, "json", None),
        dot=getattr(args, "dot", None),
        report=args.report,
        max_iterations=args.max_iterations,
        dot_depth=getattr(args, "dot_depth", 0),
    )
    return compile(opts, emit=args.command == "compile")


if __name__ == "__main__":
    raise SystemExit(main())

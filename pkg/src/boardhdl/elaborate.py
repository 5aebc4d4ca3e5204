"""Instantiate the top block, expand structure, apply refinements and run
generators interleaved with solving until nothing is pending."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

from boardhdl.design import CheckSpec, Design, Producer, instance_name, literal_producer
from boardhdl.errors import HdlError
from boardhdl.expr import Expr, value_type
from boardhdl.library.generators import GeneratorContext
from boardhdl.library.registry import LibraryRegistry
from boardhdl.model import DesignInstance, Generator, Leaf, Structural
from boardhdl.paths import Path
from boardhdl.solver import SolveReport, solve

logger = logging.getLogger(__name__)

DEFAULT_MAX_ITERATIONS = 100


@dataclass(frozen=True)
class RefinementConfig:
    by_path: dict[Path, str] = field(default_factory=dict)
    by_class: dict[str, str] = field(default_factory=dict)


def resolve_refinement(
    instance_path: Path,
    declared: str,
    cfg: RefinementConfig,
    library: LibraryRegistry,
    *,
    allow_class: bool = True,
) -> str:
    """Definition to instantiate: path refinement > class refinement > the
    abstract block's default refinement > the declared block itself."""
    definition = library.lookup(declared)
    if instance_path in cfg.by_path:
        result = cfg.by_path[instance_path]
    elif allow_class and declared in cfg.by_class:
        result = cfg.by_class[declared]
    elif definition.abstract and definition.default_refinement is not None:
        result = definition.default_refinement
    else:
        result = declared
    if not library.is_subtype(result, declared):
        raise HdlError("E_BAD_REFINEMENT", f"{result} is not a subtype of {declared}", str(instance_path))
    if library.lookup(result).abstract:
        raise HdlError(
            "E_ABSTRACT_UNREFINED",
            f"{result} is abstract; refine it to one of: {', '.join(_concrete(library, result)) or 'none available'}",
            str(instance_path),
        )
    return result


def _concrete(library: LibraryRegistry, base: str) -> list[str]:
    return [n for n in library.subtypes(base) if not library.lookup(n).abstract]


class Elaborator:
    def __init__(self, library: LibraryRegistry, cfg: RefinementConfig | None = None):
        self.library = library
        self.cfg = cfg or RefinementConfig()
        self.design = Design(library)

    def instantiate(
        self,
        parent: DesignInstance | None,
        name: str,
        declared: str,
        args: dict[str, Expr],
        *,
        from_generator: bool = False,
    ) -> DesignInstance:
        design = self.design
        path = Path.of(name) if parent is None else parent.path.child(name)
        if path in design.instances:
            raise HdlError("E_DUP_DEF", f"instance {path} already exists", str(path))
        chosen = resolve_refinement(path, declared, self.cfg, self.library, allow_class=not from_generator)
        definition = self.library.lookup(chosen)
        if chosen != declared:
            logger.info("refined %s: %s -> %s", path, declared, chosen)
        inst = DesignInstance(path, chosen, declared, from_generator=from_generator)
        design.instances[path] = inst
        if parent is None:
            design.root = inst
        else:
            parent.children[name] = inst

        design.register_ports(inst, definition)
        for arg in args:
            if arg not in definition.params:
                raise HdlError("E_UNKNOWN_PARAM", f"{chosen} has no parameter {arg!r}", str(path))
        arg_scope = parent.path if parent is not None else Path.root()
        for pname, decl in definition.params.items():
            key = f"{path}.{pname}"
            design.declare(key, decl.type, decl.dim)
            if pname in args:
                design.add_producer(Producer(key, arg_scope, args[pname], "argument"))
            elif decl.default is not None:
                design.add_producer(Producer(key, path, decl.default, "default"))
        inst.pending_generator = isinstance(definition.body, Generator)
        return inst

    def expand_block(self, inst: DesignInstance) -> DesignInstance:
        """Expand one instance: structural bodies create children, links,
        exports and checks; leaves are terminal; generators stay pending."""
        definition = self.library.lookup(inst.definition)
        body = definition.body
        if isinstance(body, Structural):
            for decl in body.instances:
                self.instantiate(inst, decl.name, decl.block, decl.args)
            for export in body.exports:
                self.design.add_export(inst, export.outer, export.inner)
            self.design.add_links(inst, [c.endpoints for c in body.connects])
            for i, expr in enumerate(body.checks, 1):
                self.design.checks.append(CheckSpec(f"{inst.path}.check{i}", "user", inst.path, expr))
            inst.expanded = True
        elif isinstance(body, Leaf) or body is None:
            inst.expanded = True
        return inst

    def expand_all(self) -> None:
        while True:
            todo = [i for i in self.design.root.walk() if not i.expanded and not i.pending_generator]
            if not todo:
                return
            for inst in todo:
                self.expand_block(inst)

    def pending(self) -> list[DesignInstance]:
        return sorted(
            (i for i in self.design.root.walk() if i.pending_generator), key=lambda i: i.path.sort_key()
        )

    def unsolved_dependencies(self, inst: DesignInstance) -> list[str]:
        body = self.library.lookup(inst.definition).body
        missing = []
        for dep in body.dependencies:
            key = self.design.dependency_key(inst, dep)
            if key is None or key not in self.design.bindings:
                missing.append(dep if key is None else key)
        return missing

    def run_generator(self, inst: DesignInstance) -> None:
        design = self.design
        body = self.library.lookup(inst.definition).body
        values = {dep: design.bindings[design.dependency_key(inst, dep)] for dep in body.dependencies}
        ctx = GeneratorContext(inst.path, inst.definition, values)
        body.generate(ctx)
        logger.debug("generated %s (%d children)", inst.path, len(ctx.children))

        for child in ctx.children:
            self.instantiate(inst, child.name, child.block, child.args, from_generator=True)
        for outer, inner in ctx.exports:
            design.add_export(inst, outer, inner)
        design.add_links(inst, ctx.connects)
        for rel, value in ctx.assignments.items():
            key = design.resolve_key(inst.path, Path.parse(rel))
            if key not in design.declared:
                raise HdlError("E_UNKNOWN_PARAM", f"generator assigned undeclared parameter {key}", str(inst.path))
            if key in design.producers:
                raise HdlError(
                    "E_GEN_CONFLICT",
                    f"{key} already has a {design.producers[key].origin} value; the generator cannot set it",
                    str(inst.path),
                )
            if value_type(value) not in (design.declared[key][0], "int"):
                raise HdlError("E_ARG_TYPE", f"generator gave {key} a {value_type(value)}", str(inst.path))
            design.add_producer(literal_producer(key, value))
        for name, expr in ctx.checks:
            design.checks.append(CheckSpec(f"{inst.path}.{name}", "generator", inst.path, expr))
        inst.pending_generator = False
        inst.expanded = True

    def run(self, top: str, max_iterations: int = DEFAULT_MAX_ITERATIONS) -> Design:
        self.instantiate(None, instance_name(top), top, {})
        rounds = 0
        while True:
            rounds += 1
            if rounds > max_iterations:
                raise HdlError(
                    "E_MAX_ITER",
                    f"elaboration did not converge within {max_iterations} rounds; "
                    f"still pending: {', '.join(str(i.path) for i in self.pending())}",
                )
            self.expand_all()
            report: SolveReport = solve(self.design)
            pending = self.pending()
            if not pending:
                break
            ready = [g for g in pending if not self.unsolved_dependencies(g)]
            if not ready:
                detail = "; ".join(f"{g.path} waits on {', '.join(self.unsolved_dependencies(g))}" for g in pending)
                raise HdlError("E_GEN_STUCK", f"no generator can run: {detail}")
            for g in ready:
                self.run_generator(g)
        self.design.rounds = rounds
        self.design.unsolved = report.unsolved
        logger.info("elaborated %s in %d round(s)", top, rounds)
        return self.design


def elaborate(
    top: str,
    cfg: RefinementConfig | None = None,
    max_iterations: int = DEFAULT_MAX_ITERATIONS,
    library: LibraryRegistry | None = None,
) -> Design:
    if library is None:
        from boardhdl.library.stdlib import standard_library

        library = standard_library()
    return Elaborator(library, cfg).run(top, max_iterations)


def expand_block(elaborator: Elaborator, inst: DesignInstance) -> DesignInstance:
    return elaborator.expand_block(inst)

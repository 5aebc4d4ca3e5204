"""Lowering of parsed block declarations into library BlockDefinitions."""

from __future__ import annotations

from boardhdl.errors import HdlError
from boardhdl.expr import compatible, infer_type
from boardhdl.hdl.parser import (
    BlockDecl,
    CheckStmt,
    ConnectStmt,
    DesignAst,
    ExportStmt,
    InstStmt,
    ParamStmt,
    PortRef,
    PortStmt,
)
from boardhdl.library.registry import LibraryRegistry
from boardhdl.model import (
    PORT_SCHEMA,
    BlockDefinition,
    Connect,
    Export,
    InstanceDecl,
    ParamDecl,
    PortDecl,
    PortKind,
    Structural,
)
from boardhdl.paths import Path

_KINDS = {k.value: k for k in PortKind}


def lower(ast: DesignAst, library: LibraryRegistry) -> list[BlockDefinition]:
    """One Structural definition per declaration, validated against the library
    and against blocks declared earlier in the same file."""
    known: dict[str, BlockDefinition] = {}
    out = []
    for decl in ast.blocks:
        if decl.name in library or decl.name in known:
            raise HdlError("E_DUP_DEF", f"block {decl.name!r} is already defined", decl.loc)
        definition = _lower_block(decl, lambda n: known[n] if n in known else library.lookup(n))
        known[decl.name] = definition
        out.append(definition)
    return out


def _lower_block(decl: BlockDecl, lookup) -> BlockDefinition:
    def resolve(name: str, loc) -> BlockDefinition:
        try:
            return lookup(name)
        except HdlError as err:
            raise err.with_location(loc)

    ports: dict[str, PortDecl] = {}
    params: dict[str, ParamDecl] = {}
    inherited = Structural()
    if decl.parent is not None:
        parent = resolve(decl.parent, decl.loc)
        ports.update(parent.ports)
        params.update(parent.params)
        if isinstance(parent.body, Structural):
            inherited = parent.body

    local: set[str] = set()
    for stmt in (*decl.of_type(PortStmt), *decl.of_type(ParamStmt)):
        if stmt.name in local:
            raise HdlError("E_DUP_DEF", f"{stmt.name!r} is declared twice in {decl.name}", stmt.loc)
        local.add(stmt.name)

    for stmt in decl.of_type(PortStmt):
        kind = _KINDS.get(stmt.kind)
        if kind is None:
            raise HdlError("E_PARSE", f"unknown port kind {stmt.kind!r}; expected one of {', '.join(_KINDS)}", stmt.loc)
        if stmt.size is not None and stmt.size < 1:
            raise HdlError("E_PARSE", "port array size must be at least 1", stmt.loc)
        schema = PORT_SCHEMA[kind]
        for arg in stmt.args:
            if arg.name not in schema:
                raise HdlError("E_UNKNOWN_PARAM", f"{stmt.kind} ports have no parameter {arg.name!r}", arg.loc)
        previous = ports.get(stmt.name)
        if previous is not None and (previous.kind != kind or previous.size != stmt.size):
            raise HdlError("E_OVERRIDE", f"port {stmt.name!r} redeclared with a different kind or size", stmt.loc)
        if stmt.name in params:
            raise HdlError("E_DUP_DEF", f"{stmt.name!r} is already a parameter", stmt.loc)
        ports[stmt.name] = PortDecl(stmt.name, kind, stmt.size, {a.name: a.value for a in stmt.args}, stmt.loc)

    for stmt in decl.of_type(ParamStmt):
        previous = params.get(stmt.name)
        if previous is not None and previous.type != stmt.type:
            raise HdlError("E_OVERRIDE", f"parameter {stmt.name!r} redeclared with a different type", stmt.loc)
        if stmt.name in ports:
            raise HdlError("E_DUP_DEF", f"{stmt.name!r} is already a port", stmt.loc)
        params[stmt.name] = ParamDecl(stmt.name, stmt.type, stmt.default, previous.dim if previous else None, stmt.loc)

    children: dict[str, BlockDefinition] = {}
    for inst in inherited.instances:
        children[inst.name] = lookup(inst.block)
    instances = list(inherited.instances)
    for stmt in decl.of_type(InstStmt):
        if stmt.name in children or stmt.name in ports or stmt.name in params:
            raise HdlError("E_DUP_DEF", f"name {stmt.name!r} is already used in {decl.name}", stmt.loc)
        children[stmt.name] = resolve(stmt.block, stmt.loc)
        instances.append(InstanceDecl(stmt.name, stmt.block, {a.name: a.value for a in stmt.args}, stmt.loc))

    scope = _Scope(decl.name, ports, params, children)
    for p in params.values():
        if p.default is not None:
            scope.check_type(p.default, p.type, f"default of {p.name}")
    for port in ports.values():
        for name, value in port.params.items():
            scope.check_type(value, "interval", f"{port.name}.{name}")
    for stmt in decl.of_type(InstStmt):
        child = children[stmt.name]
        for arg in stmt.args:
            target = child.params.get(arg.name)
            if target is None:
                raise HdlError("E_UNKNOWN_PARAM", f"{child.name} has no parameter {arg.name!r}", arg.loc)
            scope.check_type(arg.value, target.type, f"argument {arg.name}", arg.loc)

    connects = list(inherited.connects)
    for stmt in decl.of_type(ConnectStmt):
        for ep in stmt.endpoints:
            scope.port_kind(ep)
        connects.append(Connect(tuple(ep.path for ep in stmt.endpoints), stmt.loc))

    exports = list(inherited.exports)
    exported = {str(e.outer) for e in exports}
    for stmt in decl.of_type(ExportStmt):
        outer = ports.get(stmt.name)
        if outer is None:
            raise HdlError("E_UNKNOWN_PORT", f"{decl.name} has no port {stmt.name!r} to export", stmt.loc)
        if outer.size is not None:
            raise HdlError("E_UNKNOWN_PORT", f"array port {stmt.name!r} cannot be exported as a whole", stmt.loc)
        if outer.params:
            raise HdlError("E_ARG_TYPE", f"exported port {stmt.name!r} takes its parameters from the inner port", stmt.loc)
        if len(stmt.target.path) < 2:
            raise HdlError("E_UNKNOWN_PORT", "export target must be a port of a child block", stmt.target.loc)
        inner_kind = scope.port_kind(stmt.target)
        if inner_kind != outer.kind:
            raise HdlError(
                "E_CONNECT_KIND",
                f"cannot export {inner_kind} port {stmt.target.path} as {outer.kind} port {stmt.name!r}",
                stmt.loc,
            )
        if stmt.name in exported:
            raise HdlError("E_DUP_DEF", f"port {stmt.name!r} is exported twice", stmt.loc)
        exported.add(stmt.name)
        exports.append(Export(Path.of(stmt.name), stmt.target.path, stmt.loc))

    checks = list(inherited.checks)
    for stmt in decl.of_type(CheckStmt):
        scope.check_type(stmt.expr, "bool", "check", stmt.loc)
        checks.append(stmt.expr)

    return BlockDefinition(
        decl.name,
        ports=ports,
        params=params,
        body=Structural(tuple(instances), tuple(connects), tuple(exports), tuple(checks)),
        parent=decl.parent,
        abstract=decl.abstract,
        loc=decl.loc,
    )


class _Scope:
    def __init__(self, name, ports, params, children):
        self.name = name
        self.ports = ports
        self.params = params
        self.children = children

    def port_kind(self, ref: PortRef) -> PortKind:
        segs = ref.path.segments
        if len(segs) == 1:
            owner, seg = self.ports, segs[0]
        elif len(segs) == 2 and segs[0].index is None and segs[0].name in self.children:
            owner, seg = self.children[segs[0].name].ports, segs[1]
        else:
            raise HdlError("E_UNKNOWN_PORT", f"{ref.path} does not name a port in {self.name}", ref.loc)
        decl = owner.get(seg.name)
        if decl is None:
            raise HdlError("E_UNKNOWN_PORT", f"{ref.path} does not name a port in {self.name}", ref.loc)
        if (decl.size is None) != (seg.index is None) or (seg.index is not None and seg.index >= decl.size):
            size = "scalar" if decl.size is None else f"array of {decl.size}"
            raise HdlError("E_UNKNOWN_PORT", f"bad index in {ref.path}: port is {size}", ref.loc)
        return decl.kind

    def ref_type(self, path: Path) -> str | None:
        segs = path.segments
        head = segs[0]
        if len(segs) == 1:
            if head.name in self.params and head.index is None:
                return self.params[head.name].type
            raise HdlError("E_UNKNOWN_PARAM", f"{self.name} has no parameter {head.name!r}")
        if head.name in self.ports:
            if len(segs) == 2 and segs[1].name in PORT_SCHEMA[self.ports[head.name].kind]:
                return "interval"
            raise HdlError("E_UNKNOWN_PARAM", f"no port parameter {path} in {self.name}")
        child = self.children.get(head.name)
        if child is not None and head.index is None:
            second = segs[1]
            if len(segs) == 2:
                if second.name in child.params:
                    return child.params[second.name].type
                raise HdlError("E_UNKNOWN_PARAM", f"{child.name} has no parameter {second.name!r}")
            if len(segs) == 3 and second.name in child.ports:
                if segs[2].name in PORT_SCHEMA[child.ports[second.name].kind]:
                    return "interval"
                raise HdlError("E_UNKNOWN_PARAM", f"no port parameter {path} in {self.name}")
        # deeper references (into generated subtrees, links) are resolved at solve time
        return None

    def check_type(self, expr, declared: str, what: str, loc=None) -> None:
        try:
            actual = infer_type(expr, self.ref_type)
        except HdlError as err:
            raise err.with_location(loc or getattr(expr, "loc", None) or self.name)
        if not compatible(declared, actual):
            raise HdlError("E_ARG_TYPE", f"{what} expects {declared}, got {actual}", loc or getattr(expr, "loc", None))

"""The elaborated design: instance tree plus the flat tables the solver,
checks and exporters work from."""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass

from boardhdl.errors import HdlError
from boardhdl.expr import Expr, Literal, ParamValue
from boardhdl.library.registry import LibraryRegistry
from boardhdl.model import (
    LINK_PARAMS,
    PORT_SCHEMA,
    BlockDefinition,
    DesignInstance,
    Link,
    LinkKind,
    PortDecl,
    PortKind,
)
from boardhdl.paths import Path
from boardhdl.units import Dimension

_SINK_KINDS = {
    LinkKind.POWER: {PortKind.VOLTAGE_SINK},
    LinkKind.DIGITAL: {PortKind.DIGITAL_SINK, PortKind.DIGITAL_BIDIR},
}
_DIGITAL = {PortKind.DIGITAL_SOURCE, PortKind.DIGITAL_SINK, PortKind.DIGITAL_BIDIR}
_POWER = {PortKind.VOLTAGE_SOURCE, PortKind.VOLTAGE_SINK}


def classify_link(kinds: list[PortKind] | tuple[PortKind, ...]) -> tuple[LinkKind, int | None]:
    """Link kind for a set of endpoint port kinds, plus the index of the driving endpoint."""
    if len(kinds) < 2:
        raise HdlError("E_CONNECT_KIND", "a connection needs at least two ports")
    counts = Counter(kinds)
    described = ", ".join(f"{n}x {k}" for k, n in sorted(counts.items(), key=lambda kv: kv[0].value))
    if PortKind.PASSIVE in counts:
        return LinkKind.PASSIVE_NET, None
    if set(counts) <= _POWER:
        if counts[PortKind.VOLTAGE_SOURCE] == 1 and counts[PortKind.VOLTAGE_SINK] >= 1:
            return LinkKind.POWER, kinds.index(PortKind.VOLTAGE_SOURCE)
    elif set(counts) <= _DIGITAL:
        sources = counts[PortKind.DIGITAL_SOURCE]
        if sources == 1:
            return LinkKind.DIGITAL, kinds.index(PortKind.DIGITAL_SOURCE)
        if sources == 0 and counts[PortKind.DIGITAL_BIDIR] >= 1:
            # the first bidirectional port in connection order drives
            return LinkKind.DIGITAL, kinds.index(PortKind.DIGITAL_BIDIR)
    raise HdlError("E_CONNECT_KIND", f"ports {{{described}}} cannot form a Power, Digital or passive link")


def infer_link_kind(kinds) -> LinkKind:
    return classify_link(list(kinds))[0]


@dataclass(frozen=True)
class PortInfo:
    path: Path
    kind: PortKind
    owner: Path
    decl: PortDecl


@dataclass(frozen=True)
class Producer:
    key: str
    scope: Path
    expr: Expr
    origin: str  # default | argument | port | link | generator
    link: Link | None = None


@dataclass(frozen=True)
class CheckSpec:
    id: str
    kind: str  # link-voltage | link-current | threshold | generator | user
    scope: Path
    expr: Expr


def instance_name(block: str) -> str:
    """``Blinky`` -> ``blinky``, ``PowerDemo`` -> ``power_demo``."""
    return re.sub(r"(?<=[a-z0-9])(?=[A-Z])", "_", block).lower()


class Design:
    def __init__(self, library: LibraryRegistry):
        self.library = library
        self.root: DesignInstance | None = None
        self.instances: dict[Path, DesignInstance] = {}
        self.ports: dict[Path, PortInfo] = {}
        self.aliases: dict[Path, Path] = {}
        self.producers: dict[str, Producer] = {}
        self.declared: dict[str, tuple[str, Dimension | None]] = {}
        self.links: list[Link] = []
        self.link_ids: dict[Path, Link] = {}
        self.checks: list[CheckSpec] = []
        self.bindings: dict[str, ParamValue] = {}
        self.rounds = 0
        self.unsolved: list[str] = []

    def definition(self, inst: DesignInstance) -> BlockDefinition:
        return self.library.lookup(inst.definition)

    # -- ports and references -------------------------------------------
    def canonical(self, port: Path) -> Path:
        seen = set()
        while port in self.aliases:
            if port in seen:
                raise HdlError("E_CONNECT_KIND", f"export cycle through {port}")
            seen.add(port)
            port = self.aliases[port]
        return port

    def resolve_key(self, scope: Path, ref: Path) -> str:
        full = scope / ref
        owner = full.parent
        if owner in self.ports:
            return f"{self.canonical(owner)}.{full.last}"
        return str(full)

    def typed_link(self, port: Path) -> Link | None:
        target = self.canonical(port)
        for link in self.links:
            if link.kind is LinkKind.PASSIVE_NET:
                continue
            if any(self.canonical(ep) == target for ep in link.endpoints):
                return link
        return None

    def dependency_key(self, inst: DesignInstance, dep: str) -> str | None:
        """Parameter key behind a generator dependency, or None while it has no producer site."""
        m = re.fullmatch(r"link\((.+)\)\.([A-Za-z_]\w*)", dep)
        if m:
            link = self.typed_link(inst.path / Path.parse(m.group(1)))
            return None if link is None else link.param_key(m.group(2))
        return self.resolve_key(inst.path, Path.parse(dep))

    # -- registration -----------------------------------------------------
    def declare(self, key: str, type_: str, dim: Dimension | None) -> None:
        self.declared[key] = (type_, dim)

    def add_producer(self, producer: Producer) -> None:
        existing = self.producers.get(producer.key)
        if existing is not None:
            raise HdlError(
                "E_MULTI_PRODUCER",
                f"parameter {producer.key} already has a {existing.origin} producer; "
                f"cannot add a {producer.origin} one",
                producer.key,
            )
        self.producers[producer.key] = producer

    def register_ports(self, inst: DesignInstance, definition: BlockDefinition) -> None:
        for decl in definition.ports.values():
            for element in decl.element_paths(inst.path):
                self.ports[element] = PortInfo(element, decl.kind, inst.path, decl)
                for pname, dim in PORT_SCHEMA[decl.kind].items():
                    self.declare(f"{element}.{pname}", "interval", dim)
                for pname, expr in decl.params.items():
                    self.add_producer(Producer(f"{element}.{pname}", inst.path, expr, "port"))

    def add_links(self, inst: DesignInstance, connects: list[tuple[Path, ...]]) -> None:
        """Turn connection statements of one block into links; statements sharing a port merge."""
        groups: list[list[Path]] = []
        for endpoints in connects:
            absolute = []
            for ep in endpoints:
                full = inst.path / ep
                if full not in self.ports:
                    raise HdlError("E_UNKNOWN_PORT", f"{ep} does not name a port of {inst.path}", str(full))
                absolute.append(full)
            hits = [g for g in groups if any(p in g for p in absolute)]
            merged: list[Path] = []
            for g in hits:
                merged.extend(p for p in g if p not in merged)
                groups.remove(g)
            merged.extend(p for p in absolute if p not in merged)
            groups.append(merged)

        exported_inner = {inner for _, inner in inst.exports}
        used = {link.id.last.name for link in inst.links}
        for group in groups:
            for p in group:
                if p in exported_inner:
                    raise HdlError("E_CONNECT_KIND", f"{p} is exported and cannot also be connected", str(p))
            kinds = [self.ports[p].kind for p in group]
            try:
                kind, driver = classify_link(kinds)
            except HdlError as err:
                raise err.with_location(str(inst.path))
            if kind is not LinkKind.PASSIVE_NET and any(self.ports[p].owner == inst.path for p in group):
                raise HdlError(
                    "E_CONNECT_KIND",
                    f"own port of {inst.path} can only join a passive net from inside; use export",
                    str(inst.path),
                )
            first = group[0].last
            base = f"{first.name}{'' if first.index is None else first.index}_net"
            name, n = base, 1
            while name in used or name in inst.children:
                n += 1
                name = f"{base}_{n}"
            used.add(name)
            sinks = ()
            if driver is not None:
                sinks = tuple(p for i, p in enumerate(group) if i != driver and kinds[i] in _SINK_KINDS[kind])
            link = Link(
                inst.path.child(name),
                kind,
                tuple(group),
                tuple(kinds),
                None if driver is None else group[driver],
                sinks,
            )
            inst.links.append(link)
            self.links.append(link)
            self.link_ids[link.id] = link
            if kind is not LinkKind.PASSIVE_NET:
                from boardhdl.solver import link_rules

                for pname, dim in LINK_PARAMS.items():
                    self.declare(link.param_key(pname), "interval", dim)
                for key, expr in link_rules(link):
                    self.add_producer(Producer(key, Path.root(), expr, "link", link))

    def add_export(self, inst: DesignInstance, outer: Path, inner: Path) -> None:
        o, i = inst.path / outer, inst.path / inner
        for p in (o, i):
            if p not in self.ports:
                raise HdlError("E_UNKNOWN_PORT", f"{p} is not a port", str(p))
        if self.ports[o].kind != self.ports[i].kind:
            raise HdlError("E_CONNECT_KIND", f"cannot export {self.ports[i].kind} {i} as {self.ports[o].kind}", str(o))
        if o in self.aliases:
            raise HdlError("E_DUP_DEF", f"{o} is exported twice", str(o))
        self.aliases[o] = i
        inst.exports.append((o, i))

    # -- queries --------------------------------------------------------
    def value(self, scope: Path, ref: Path) -> ParamValue | None:
        return self.bindings.get(self.resolve_key(scope, ref))

    def param(self, path: str) -> ParamValue | None:
        """Solved value by absolute text path, e.g. ``blinky.led.resistance``."""
        p = Path.parse(path)
        return self.bindings.get(self.resolve_key(p.parent, Path((p.last,))))

    def leaves(self) -> list[DesignInstance]:
        from boardhdl.model import Leaf

        return [i for i in self.root.walk() if isinstance(self.definition(i).body, Leaf)] if self.root else []



def literal_producer(key: str, value: ParamValue, origin: str = "generator") -> Producer:
    return Producer(key, Path.root(), Literal(value), origin)

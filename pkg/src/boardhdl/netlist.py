"""Flattening to pin-level nets and netlist serialization (KiCad-style S-expression and JSON)."""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field

from boardhdl.design import Design
from boardhdl.expr import eval_expr
from boardhdl.interval import Empty, Interval
from boardhdl.model import DesignInstance, Leaf, Link
from boardhdl.paths import Path
from boardhdl.units import format_si


class UnionFind:
    def __init__(self):
        self.parent: dict = {}

    def add(self, x) -> None:
        self.parent.setdefault(x, x)

    def find(self, x):
        self.add(x)
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a, b) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            # deterministic representative: the smaller path wins
            if rb.sort_key() < ra.sort_key():
                ra, rb = rb, ra
            self.parent[rb] = ra


@dataclass(frozen=True)
class Pin:
    instance: Path
    port: Path  # absolute port element path
    pin: str


@dataclass
class NetPartition:
    nets: list[list[Pin]] = field(default_factory=list)
    links: list[list[Link]] = field(default_factory=list)  # contributing links, parallel to nets
    dangling: list[Pin] = field(default_factory=list)


def leaf_pins(design: Design) -> list[Pin]:
    pins = []
    for inst in design.leaves():
        leaf = design.definition(inst).body
        for element in design.definition(inst).port_elements():
            pins.append(Pin(inst.path, inst.path / element, leaf.pins[element]))
    return pins


def flatten_nets(design: Design) -> NetPartition:
    """Union pins connected through any chain of links and export aliases."""
    uf = UnionFind()
    for port in design.ports:
        uf.add(port)
    for link in design.links:
        for ep in link.endpoints[1:]:
            uf.union(link.endpoints[0], ep)
    for outer, inner in design.aliases.items():
        uf.union(outer, inner)

    groups: dict[Path, list[Pin]] = {}
    for pin in leaf_pins(design):
        groups.setdefault(uf.find(pin.port), []).append(pin)
    by_root: dict[Path, list[Link]] = {}
    for link in design.links:
        by_root.setdefault(uf.find(link.endpoints[0]), []).append(link)

    partition = NetPartition()
    for root, pins in groups.items():
        if len(pins) == 1:
            partition.dangling.append(pins[0])
        else:
            partition.nets.append(pins)
            partition.links.append(by_root.get(root, []))
    return partition


def assign_refdes(leaves: list[tuple[Path, str]]) -> dict[Path, str]:
    """``leaves`` are (instance path, refdes prefix) in depth-first pre-order."""
    counters: dict[str, int] = {}
    out = {}
    for path, prefix in leaves:
        counters[prefix] = counters.get(prefix, 0) + 1
        out[path] = f"{prefix}{counters[prefix]}"
    return out


def net_name(links: list[Link], pins: list[Pin]) -> str:
    """Canonical path of the shallowest contributing link, ties broken lexicographically."""
    if links:
        return str(min(links, key=lambda l: (len(l.id), str(l.id))).id)
    return str(min((p.port for p in pins), key=lambda p: (len(p), str(p))))


def name_nets(partition: NetPartition) -> list[tuple[str, list[Pin]]]:
    named = [(net_name(links, pins), pins) for pins, links in zip(partition.nets, partition.links)]
    return sorted(named, key=lambda item: item[0])


def _natural(text: str) -> tuple:
    return tuple(int(t) if t.isdigit() else t for t in re.split(r"(\d+)", text))


def refdes_key(ref: str) -> tuple:
    m = re.fullmatch(r"([A-Za-z_]+)(\d+)", ref)
    return (m.group(1), int(m.group(2))) if m else (ref, 0)


@dataclass(frozen=True)
class Component:
    ref: str
    footprint: str
    value: str
    definition: str
    path: str


@dataclass(frozen=True)
class Net:
    code: int
    name: str
    nodes: tuple[tuple[str, str], ...]  # (refdes, pin)


@dataclass(frozen=True)
class Netlist:
    components: tuple[Component, ...] = ()
    nets: tuple[Net, ...] = ()

    def component(self, ref: str) -> Component:
        return next(c for c in self.components if c.ref == ref)

    def to_dict(self) -> dict:
        return {
            "components": [
                {"definition": c.definition, "footprint": c.footprint, "path": c.path, "ref": c.ref, "value": c.value}
                for c in self.components
            ],
            "nets": [
                {"code": n.code, "name": n.name, "nodes": [{"pin": pin, "ref": ref} for ref, pin in n.nodes]}
                for n in self.nets
            ],
        }

    @classmethod
    def from_dict(cls, doc: dict) -> Netlist:
        return cls(
            tuple(Component(c["ref"], c["footprint"], c["value"], c["definition"], c["path"]) for c in doc["components"]),
            tuple(
                Net(n["code"], n["name"], tuple((node["ref"], node["pin"]) for node in n["nodes"]))
                for n in doc["nets"]
            ),
        )


def render_value(design: Design, inst: DesignInstance, leaf: Leaf) -> str:
    try:
        value = eval_expr(leaf.value, lambda p: design.bindings[design.resolve_key(inst.path, p)])
    except KeyError:
        return "?"
    if isinstance(value, Interval):
        return format_si(value.mid)
    if isinstance(value, Empty):
        return "?"
    if isinstance(value, bool):
        return "true" if value else "false"
    return str(value)


@dataclass
class NetlistResult:
    netlist: Netlist
    dangling: list[str]


def build_netlist(design: Design) -> NetlistResult:
    leaves = design.leaves()
    refs = assign_refdes([(i.path, design.definition(i).body.refdes_prefix) for i in leaves])
    components = []
    for inst in leaves:
        leaf = design.definition(inst).body
        components.append(Component(refs[inst.path], leaf.footprint, render_value(design, inst, leaf), inst.definition, str(inst.path)))
    components.sort(key=lambda c: refdes_key(c.ref))

    partition = flatten_nets(design)
    nets = []
    for code, (name, pins) in enumerate(name_nets(partition), 1):
        nodes = sorted(((refs[p.instance], p.pin) for p in pins), key=lambda n: (refdes_key(n[0]), _natural(n[1])))
        nets.append(Net(code, name, tuple(nodes)))
    dangling = sorted(f"{refs[p.instance]}.{p.pin}" for p in partition.dangling)
    return NetlistResult(Netlist(tuple(components), tuple(nets)), dangling)


def _quote(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


def _atom(text: str) -> str:
    return text if re.fullmatch(r"[A-Za-z0-9_.+\-]+", text) else _quote(text)


def emit_kicad(netlist: Netlist) -> str:
    comps = [
        f"    (comp (ref {_atom(c.ref)}) (value {_quote(c.value)}) (footprint {_quote(c.footprint)}))"
        for c in netlist.components
    ]
    nets = []
    for n in netlist.nets:
        nodes = " ".join(f"(node (ref {_atom(ref)}) (pin {_atom(pin)}))" for ref, pin in n.nodes)
        nets.append(f"    (net (code {n.code}) (name {_quote(n.name)}) {nodes})")
    comp_block = "  (components" + ("\n" + "\n".join(comps) if comps else "") + ")"
    net_block = "  (nets" + ("\n" + "\n".join(nets) if nets else "") + ")"
    return f"(export (version D)\n{comp_block}\n{net_block})\n"


def emit_json(netlist: Netlist) -> str:
    return json.dumps(netlist.to_dict(), sort_keys=True, separators=(",", ":")) + "\n"


def parse_json(text: str) -> Netlist:
    return Netlist.from_dict(json.loads(text))

"""Static Graphviz rendering of the block hierarchy."""

from __future__ import annotations

from boardhdl.design import Design
from boardhdl.model import DesignInstance, LinkKind
from boardhdl.paths import Path


def _q(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


def emit_dot(design: Design, depth: int = 0) -> str:
    """Clusters for non-leaf blocks shallower than ``depth`` (0 = unlimited),
    one node per block at the cutoff or leaf, and one edge set per link."""
    root = design.root
    lines = [f"digraph {_q(str(root.path))} {{", "  rankdir=LR;", "  node [shape=box];"]

    def level(inst: DesignInstance) -> int:
        return len(inst.path) - len(root.path)

    def is_cluster(inst: DesignInstance) -> bool:
        return bool(inst.children) and (depth == 0 or level(inst) < depth)

    def visible(port: Path) -> Path:
        """Node an endpoint attaches to: the owning block, or its nearest collapsed ancestor."""
        owner = design.ports[port].owner
        inst = design.instances[owner]
        chain = [inst]
        while len(chain[-1].path) > len(root.path):
            chain.append(design.instances[chain[-1].path.parent])
        for candidate in reversed(chain[:-1]):
            if not is_cluster(candidate):
                return candidate.path
        return port  # a port of the top block or of a cluster

    edges = []
    port_nodes: set[Path] = set()
    for link in sorted(design.links, key=lambda l: l.id.sort_key()):
        ends = [visible(ep) for ep in link.endpoints]
        tail_index = link.endpoints.index(link.driver) if link.driver is not None else 0
        tail = ends[tail_index]
        attrs = f"label={_q(link.id.last.name)}"
        if link.kind is LinkKind.PASSIVE_NET:
            attrs += ", dir=none"
        for i, head in enumerate(ends):
            if i == tail_index or head == tail:
                continue
            edges.append(f"  {_q(str(tail))} -> {_q(str(head))} [{attrs}];")
            for end in (tail, head):
                if end in design.ports:
                    port_nodes.add(end)

    def emit(inst: DesignInstance, indent: str) -> None:
        for child in inst.children.values():
            if is_cluster(child):
                lines.append(f"{indent}subgraph {_q('cluster_' + str(child.path))} {{")
                lines.append(f"{indent}  label={_q(child.path.last.name + ': ' + child.definition)};")
                for port in sorted((p for p in port_nodes if design.ports[p].owner == child.path), key=Path.sort_key):
                    lines.append(f"{indent}  {_q(str(port))} [shape=point, xlabel={_q(str(port.last))}];")
                emit(child, indent + "  ")
                lines.append(f"{indent}}}")
            else:
                label = f"{child.path.last.name}\\n{child.definition}"
                lines.append(f"{indent}{_q(str(child.path))} [label=\"{label}\"];")

    for port in sorted((p for p in port_nodes if design.ports[p].owner == root.path), key=Path.sort_key):
        lines.append(f"  {_q(str(port))} [shape=point, xlabel={_q(str(port.last))}];")
    emit(root, "  ")
    lines.extend(edges)
    lines.append("}")
    return "\n".join(lines) + "\n"

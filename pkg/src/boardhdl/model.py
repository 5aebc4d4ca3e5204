"""Intermediate representation shared by all stages: port kinds, block definitions,
instances and links."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import TYPE_CHECKING, Callable

from boardhdl.errors import SourceLocation
from boardhdl.expr import Expr
from boardhdl.paths import Path
from boardhdl.units import AMPERE, VOLT, Dimension

if TYPE_CHECKING:
    from boardhdl.library.generators import GeneratorContext


class PortKind(Enum):
    VOLTAGE_SOURCE = "VoltageSource"
    VOLTAGE_SINK = "VoltageSink"
    DIGITAL_SOURCE = "DigitalSource"
    DIGITAL_SINK = "DigitalSink"
    DIGITAL_BIDIR = "DigitalBidir"
    PASSIVE = "Passive"

    def __str__(self) -> str:
        return self.value


_SOURCE_PARAMS = {"voltage_out": VOLT, "output_thresholds": VOLT, "current_limits": AMPERE}
_SINK_PARAMS = {"voltage_limits": VOLT, "input_thresholds": VOLT, "current_draw": AMPERE}

PORT_SCHEMA: dict[PortKind, dict[str, Dimension]] = {
    PortKind.VOLTAGE_SOURCE: {"voltage_out": VOLT, "current_limits": AMPERE},
    PortKind.VOLTAGE_SINK: {"voltage_limits": VOLT, "current_draw": AMPERE},
    PortKind.DIGITAL_SOURCE: dict(_SOURCE_PARAMS),
    PortKind.DIGITAL_SINK: dict(_SINK_PARAMS),
    PortKind.DIGITAL_BIDIR: {**_SOURCE_PARAMS, **_SINK_PARAMS},
    PortKind.PASSIVE: {},
}


class LinkKind(Enum):
    POWER = "Power"
    DIGITAL = "Digital"
    PASSIVE_NET = "PassiveNet"

    def __str__(self) -> str:
        return self.value


LINK_PARAMS = {"voltage": VOLT, "current_draw": AMPERE}


@dataclass(frozen=True)
class PortDecl:
    name: str
    kind: PortKind
    size: int | None = None  # None for a scalar port, else fixed array length
    params: dict[str, Expr] = field(default_factory=dict)
    loc: SourceLocation | None = field(default=None, compare=False)

    def element_paths(self, owner: Path) -> list[Path]:
        if self.size is None:
            return [owner.child(self.name)]
        return [owner.child(self.name, i) for i in range(self.size)]


@dataclass(frozen=True)
class ParamDecl:
    name: str
    type: str  # interval | bool | int | text
    default: Expr | None = None
    dim: Dimension | None = None
    loc: SourceLocation | None = field(default=None, compare=False)


@dataclass(frozen=True)
class InstanceDecl:
    name: str
    block: str
    args: dict[str, Expr] = field(default_factory=dict)
    loc: SourceLocation | None = field(default=None, compare=False)


@dataclass(frozen=True)
class Connect:
    endpoints: tuple[Path, ...]
    loc: SourceLocation | None = field(default=None, compare=False)


@dataclass(frozen=True)
class Export:
    outer: Path
    inner: Path
    loc: SourceLocation | None = field(default=None, compare=False)


@dataclass(frozen=True)
class Structural:
    instances: tuple[InstanceDecl, ...] = ()
    connects: tuple[Connect, ...] = ()
    exports: tuple[Export, ...] = ()
    checks: tuple[Expr, ...] = ()


@dataclass(frozen=True)
class Generator:
    dependencies: tuple[str, ...]
    generate: Callable[[GeneratorContext], None]


@dataclass(frozen=True)
class Leaf:
    footprint: str
    refdes_prefix: str
    value: Expr
    pins: dict[Path, str]  # port element (relative path) -> pin name


Body = Structural | Generator | Leaf | None


@dataclass(frozen=True)
class BlockDefinition:
    name: str
    ports: dict[str, PortDecl] = field(default_factory=dict)
    params: dict[str, ParamDecl] = field(default_factory=dict)
    body: Body = None
    parent: str | None = None
    abstract: bool = False
    default_refinement: str | None = None
    doc: str = ""
    loc: SourceLocation | None = field(default=None, compare=False)

    @property
    def kind(self) -> str:
        if self.abstract:
            return "abstract"
        if isinstance(self.body, Leaf):
            return "leaf"
        if isinstance(self.body, Generator):
            return "generator"
        return "structural"

    def port_elements(self) -> list[Path]:
        out = []
        for decl in self.ports.values():
            out.extend(decl.element_paths(Path.root()))
        return out


@dataclass
class Link:
    id: Path
    kind: LinkKind
    endpoints: tuple[Path, ...]  # as written, absolute
    kinds: tuple[PortKind, ...]
    driver: Path | None = None
    sinks: tuple[Path, ...] = ()

    def param_key(self, name: str) -> str:
        return f"{self.id}.{name}"


@dataclass
class DesignInstance:
    path: Path
    definition: str
    declared: str
    children: dict[str, DesignInstance] = field(default_factory=dict)
    links: list[Link] = field(default_factory=list)
    exports: list[tuple[Path, Path]] = field(default_factory=list)
    pending_generator: bool = False
    expanded: bool = False
    from_generator: bool = False

    def walk(self):
        """Depth-first pre-order over the subtree, children in declaration order."""
        yield self
        for child in self.children.values():
            yield from child.walk()

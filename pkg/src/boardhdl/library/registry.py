from __future__ import annotations

import logging
from typing import Iterable, Iterator

from boardhdl.errors import HdlError
from boardhdl.model import BlockDefinition, Leaf

logger = logging.getLogger(__name__)

ROOT_NAME = "Block"


class LibraryRegistry:
    """Immutable name -> BlockDefinition map with the subtype relation precomputed."""

    def __init__(self, definitions: Iterable[BlockDefinition]):
        self._defs: dict[str, BlockDefinition] = {}
        for d in definitions:
            if d.name in self._defs:
                raise HdlError("E_DUP_DEF", f"block {d.name!r} is defined twice", d.loc)
            self._defs[d.name] = d
        self._ancestors: dict[str, tuple[str, ...]] = {}
        for name in self._defs:
            self._ancestors[name] = self._chain(name)
        for d in self._defs.values():
            self._validate(d)

    def _chain(self, name: str) -> tuple[str, ...]:
        chain, seen = [], set()
        current: str | None = name
        while current is not None:
            if current in seen:
                raise HdlError("E_SUBTYPE_CYCLE", f"parent chain of {name!r} is cyclic")
            seen.add(current)
            chain.append(current)
            d = self._defs.get(current)
            if d is None:
                raise HdlError("E_UNKNOWN_BLOCK", f"parent {current!r} of {chain[-2]!r} is not defined")
            current = d.parent
        return tuple(chain)

    def _validate(self, d: BlockDefinition) -> None:
        if d.abstract and isinstance(d.body, Leaf):
            raise HdlError("E_OVERRIDE", f"abstract block {d.name!r} cannot have a leaf body", d.loc)
        if isinstance(d.body, Leaf):
            missing = [str(p) for p in d.port_elements() if p not in d.body.pins]
            if missing:
                raise HdlError("E_OVERRIDE", f"leaf {d.name!r} has no pin for {', '.join(missing)}", d.loc)
        if d.parent is not None:
            parent = self._defs[d.parent]
            for name, port in parent.ports.items():
                mine = d.ports.get(name)
                if mine is None or mine.kind != port.kind or mine.size != port.size:
                    raise HdlError(
                        "E_OVERRIDE", f"{d.name!r} must keep port {name!r} of {parent.name!r} unchanged", d.loc
                    )
            for name, param in parent.params.items():
                mine = d.params.get(name)
                if mine is None or mine.type != param.type:
                    raise HdlError(
                        "E_OVERRIDE", f"{d.name!r} must keep parameter {name!r} of {parent.name!r}", d.loc
                    )
        if d.default_refinement is not None:
            if d.default_refinement not in self._defs:
                raise HdlError("E_UNKNOWN_BLOCK", f"default refinement {d.default_refinement!r} is not defined")
            if not self.is_subtype(d.default_refinement, d.name):
                raise HdlError("E_BAD_REFINEMENT", f"{d.default_refinement!r} is not a subtype of {d.name!r}")

    def lookup(self, name: str) -> BlockDefinition:
        try:
            return self._defs[name]
        except KeyError:
            raise HdlError("E_UNKNOWN_BLOCK", f"unknown block {name!r}") from None

    def __contains__(self, name: str) -> bool:
        return name in self._defs

    def __iter__(self) -> Iterator[BlockDefinition]:
        return iter(self._defs.values())

    def __len__(self) -> int:
        return len(self._defs)

    def names(self) -> list[str]:
        return sorted(self._defs)

    def is_subtype(self, candidate: str, base: str) -> bool:
        self.lookup(base)
        self.lookup(candidate)
        return base in self._ancestors[candidate]

    def subtypes(self, base: str) -> list[str]:
        return sorted(n for n in self._defs if base in self._ancestors[n])

    def extended(self, definitions: Iterable[BlockDefinition]) -> LibraryRegistry:
        return LibraryRegistry([*self._defs.values(), *definitions])


def library_lookup(registry: LibraryRegistry, name: str) -> BlockDefinition:
    return registry.lookup(name)


def is_subtype(registry: LibraryRegistry, candidate: str, base: str) -> bool:
    return registry.is_subtype(candidate, base)

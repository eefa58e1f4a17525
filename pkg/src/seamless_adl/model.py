"""The architecture model graph: elements, typed links and adjacency indices.

Models are built through :class:`ModelBuilder` and frozen into an
:class:`ArchitectureModel`, which never changes afterwards.  Every listing
comes back sorted by element id so analyses are deterministic.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Iterable, Mapping

from .diagnostics import Diagnostic, Severity, SourceLocation
from .metamodel import ElementKind, LinkKind, allowed_link


class UnknownElementError(KeyError):
    code = "E-UNKNOWN-ID"

    def __init__(self, element_id: str):
        super().__init__(element_id)
        self.element_id = element_id

    def __str__(self) -> str:
        return f"unknown element id {self.element_id!r}"


@dataclass(frozen=True, eq=False)
class Element:
    id: str
    kind: ElementKind
    name: str = ""
    attributes: Mapping[str, str] = field(default_factory=dict)
    automated: bool = False
    location: SourceLocation | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "attributes", MappingProxyType(dict(self.attributes)))

    def structure(self) -> tuple:
        """Everything that identifies the element except where it was written."""
        return (self.id, self.kind, self.name,
                tuple(sorted(self.attributes.items())), self.automated)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Element):
            return NotImplemented
        return self.structure() == other.structure()

    def __hash__(self) -> int:
        return hash(self.structure())

    def __repr__(self) -> str:
        return f"Element({self.id!r}, {self.kind.value}, {self.name!r})"


@dataclass(frozen=True)
class Link:
    kind: LinkKind
    src: str
    dst: str
    location: SourceLocation | None = field(default=None, compare=False)

    @property
    def key(self) -> tuple[str, str, str]:
        return (self.kind.value, self.src, self.dst)


class ArchitectureModel:
    """Frozen, indexed element graph."""

    def __init__(self, elements: Mapping[str, Element], links: Iterable[Link]):
        self._elements = MappingProxyType(
            {eid: elements[eid] for eid in sorted(elements)})
        self._links = tuple(links)
        out_index: dict[tuple[str, LinkKind], set[str]] = defaultdict(set)
        in_index: dict[tuple[str, LinkKind], set[str]] = defaultdict(set)
        for link in self._links:
            out_index[link.src, link.kind].add(link.dst)
            in_index[link.dst, link.kind].add(link.src)
        self._out = {key: tuple(sorted(v)) for key, v in out_index.items()}
        self._in = {key: tuple(sorted(v)) for key, v in in_index.items()}
        by_kind: dict[ElementKind, list[str]] = defaultdict(list)
        for eid, element in self._elements.items():
            by_kind[element.kind].append(eid)
        self._by_kind = dict(by_kind)

    @property
    def elements(self) -> Mapping[str, Element]:
        return self._elements

    @property
    def links(self) -> tuple[Link, ...]:
        return self._links

    def __len__(self) -> int:
        return len(self._elements)

    def __contains__(self, element_id: object) -> bool:
        return element_id in self._elements

    def element(self, element_id: str) -> Element:
        try:
            return self._elements[element_id]
        except KeyError:
            raise UnknownElementError(element_id) from None

    def kind_of(self, element_id: str) -> ElementKind:
        return self.element(element_id).kind

    def _neighbors(self, index, element_id: str, link_kind: LinkKind | None):
        if element_id not in self._elements:
            raise UnknownElementError(element_id)
        if link_kind is not None:
            return list(index.get((element_id, link_kind), ()))
        found: set[str] = set()
        for kind in LinkKind:
            found.update(index.get((element_id, kind), ()))
        return sorted(found)

    def out_neighbors(self, element_id: str, link_kind: LinkKind | None = None) -> list[str]:
        return self._neighbors(self._out, element_id, link_kind)

    def in_neighbors(self, element_id: str, link_kind: LinkKind | None = None) -> list[str]:
        return self._neighbors(self._in, element_id, link_kind)

    def elements_of_kind(self, kind: ElementKind) -> list[str]:
        return list(self._by_kind.get(kind, ()))

    def sorted_links(self) -> list[Link]:
        return sorted(self._links, key=lambda link: link.key)

    def structure(self) -> tuple:
        return (frozenset(e.structure() for e in self._elements.values()),
                tuple(sorted(link.key for link in self._links)))

    def __repr__(self) -> str:
        return f"<ArchitectureModel {len(self._elements)} elements, {len(self._links)} links>"


def structurally_equal(a: ArchitectureModel, b: ArchitectureModel) -> bool:
    """Same element set, same link multiset, same attributes; locations ignored."""
    return a.structure() == b.structure()


class ModelBuilder:
    """Single-writer construction of a model, then :meth:`freeze`."""

    def __init__(self) -> None:
        self._elements: dict[str, Element] = {}
        self._links: list[Link] = []
        self._link_keys: set[tuple[str, str, str]] = set()
        self._frozen = False

    def _check_open(self) -> None:
        if self._frozen:
            raise RuntimeError("model is frozen")

    def __contains__(self, element_id: object) -> bool:
        return element_id in self._elements

    def get(self, element_id: str) -> Element | None:
        return self._elements.get(element_id)

    @property
    def element_count(self) -> int:
        return len(self._elements)

    def add_element(self, element: Element) -> Diagnostic | None:
        self._check_open()
        previous = self._elements.get(element.id)
        if previous is not None:
            where = f" (first defined at {previous.location})" if previous.location else ""
            return Diagnostic("E-ID-DUP", Severity.ERROR, (element.id,),
                              f"identifier {element.id} defined more than once{where}",
                              element.location)
        self._elements[element.id] = element
        return None

    def add_link(self, link: Link) -> Diagnostic | None:
        """Register a link.

        Returns ``None`` on success, an error diagnostic when the link is
        rejected, or an ``I-DUP-LINK`` info diagnostic when an identical
        link already exists (the model keeps a single copy).
        """
        self._check_open()
        missing = [eid for eid in (link.src, link.dst) if eid not in self._elements]
        if missing:
            return Diagnostic("E-REF-UNRES", Severity.ERROR, (link.src, link.dst),
                              f"unresolved reference {', '.join(missing)} in "
                              f"{link.kind.value} {link.src} -> {link.dst}",
                              link.location)
        src_kind = self._elements[link.src].kind
        dst_kind = self._elements[link.dst].kind
        if not allowed_link(src_kind, link.kind, dst_kind):
            return Diagnostic("E-LINK-META", Severity.ERROR, (link.src, link.dst),
                              f"{src_kind.value} {link.src} cannot {link.kind.value} "
                              f"{dst_kind.value} {link.dst}",
                              link.location)
        if link.key in self._link_keys:
            return Diagnostic("I-DUP-LINK", Severity.INFO, (link.src, link.dst),
                              f"duplicate {link.kind.value} {link.src} -> {link.dst} ignored",
                              link.location)
        self._link_keys.add(link.key)
        self._links.append(link)
        return None

    def has_link(self, kind: LinkKind, src: str, dst: str) -> bool:
        return (kind.value, src, dst) in self._link_keys

    def freeze(self) -> ArchitectureModel:
        self._frozen = True
        return ArchitectureModel(self._elements, self._links)


def build_model(elements: Iterable[Element], links: Iterable[Link]
                ) -> tuple[ArchitectureModel, list[Diagnostic]]:
    """Convenience wrapper: add everything, collect diagnostics, freeze."""
    builder = ModelBuilder()
    diagnostics = []
    for element in elements:
        if (diag := builder.add_element(element)) is not None:
            diagnostics.append(diag)
    for link in links:
        if (diag := builder.add_link(link)) is not None:
            diagnostics.append(diag)
    return builder.freeze(), diagnostics


EMPTY_MODEL = ArchitectureModel({}, ())

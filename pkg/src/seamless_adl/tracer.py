"""Trace closures, impact sets, traceability matrices and seam coverage.

A trace follows a selected set of link kinds breadth-first.  Forward means
from the abstract towards the concrete (process to method); for ownership
and deployment links, which point from container to part, forward walks
from the part to its container instead, answering "where does it live".
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .metamodel import (OWNERSHIP_LINKS, ElementKind, Layer, LinkKind, Seam,
                        layer_of, seam_catalog)
from .model import ArchitectureModel, Link

L = LinkKind
K = ElementKind

DEFAULT_LINKS = frozenset({
    L.DECOMPOSES, L.HAS_SERVICE, L.CONTAINS_AUTOFN, L.SVC_DIALOG,
    L.IMPLEMENTS, L.HAS_VIEWFN, L.VF_MODULE, L.MOD_METHOD,
})
EXTENDED_LINKS = DEFAULT_LINKS | OWNERSHIP_LINKS
# Everything, including a dialog's resources, products and forms.
FULL_LINKS = EXTENDED_LINKS | {L.INPUT, L.OUTPUT, L.HAS_FORM}

SELECTORS = {"default": DEFAULT_LINKS, "extended": EXTENDED_LINKS, "full": FULL_LINKS}

FORWARD = "forward"
BACKWARD = "backward"


@dataclass(frozen=True)
class TraceOptions:
    links: str | frozenset[LinkKind] = "default"
    depth: int | None = None

    def __post_init__(self) -> None:
        if isinstance(self.links, str) and self.links not in SELECTORS:
            raise ValueError(f"unknown link selector {self.links!r}")
        if self.depth is not None and self.depth < 0:
            raise ValueError("depth must be non-negative")

    @property
    def link_kinds(self) -> frozenset[LinkKind]:
        if isinstance(self.links, str):
            return SELECTORS[self.links]
        return frozenset(self.links)


DEFAULT_OPTIONS = TraceOptions()


@dataclass(frozen=True)
class TraceResult:
    root: str
    direction: str
    reached: dict[Layer, tuple[str, ...]]
    edges: tuple[Link, ...]

    @property
    def ids(self) -> list[str]:
        return sorted(eid for layer_ids in self.reached.values() for eid in layer_ids)

    def __contains__(self, element_id: object) -> bool:
        return any(element_id in ids for ids in self.reached.values())

    def __len__(self) -> int:
        return sum(len(ids) for ids in self.reached.values())


def _steps(model: ArchitectureModel, eid: str, direction: str,
           kinds: Iterable[LinkKind]) -> list[tuple[str, Link]]:
    """Neighbors one hop away, with the model link that was crossed."""
    steps = []
    for kind in sorted(kinds, key=lambda k: k.value):
        walks_out = (direction == FORWARD) != (kind in OWNERSHIP_LINKS)
        if walks_out:
            steps.extend((dst, Link(kind, eid, dst)) for dst in model.out_neighbors(eid, kind))
        else:
            steps.extend((src, Link(kind, src, eid)) for src in model.in_neighbors(eid, kind))
    steps.sort(key=lambda step: (step[0], step[1].key))
    return steps


def trace(model: ArchitectureModel, element_id: str, direction: str = FORWARD,
          options: TraceOptions = DEFAULT_OPTIONS) -> TraceResult:
    """Breadth-first closure from ``element_id``.

    Raises :class:`~seamless_adl.model.UnknownElementError` for unknown ids.
    """
    if direction not in (FORWARD, BACKWARD):
        raise ValueError(f"direction must be {FORWARD!r} or {BACKWARD!r}")
    model.element(element_id)
    kinds = options.link_kinds
    seen = {element_id}
    frontier = [element_id]
    edges: list[Link] = []
    depth = 0
    while frontier and (options.depth is None or depth < options.depth):
        discovered: set[str] = set()
        for eid in frontier:
            for neighbor, link in _steps(model, eid, direction, kinds):
                edges.append(link)
                if neighbor not in seen:
                    seen.add(neighbor)
                    discovered.add(neighbor)
        frontier = sorted(discovered)
        depth += 1
    by_layer: dict[Layer, list[str]] = {}
    for eid in sorted(seen):
        by_layer.setdefault(layer_of(model.kind_of(eid)), []).append(eid)
    reached = {layer: tuple(by_layer[layer]) for layer in Layer if layer in by_layer}
    return TraceResult(element_id, direction, reached, tuple(edges))


def impact(model: ArchitectureModel, element_id: str,
           options: TraceOptions = DEFAULT_OPTIONS) -> list[str]:
    """Everything that realizes, or is realized by, ``element_id``."""
    forward = trace(model, element_id, FORWARD, options).ids
    backward = trace(model, element_id, BACKWARD, options).ids
    return sorted(set(forward) | set(backward))


def trace_matrix(model: ArchitectureModel, from_kind: ElementKind, to_kind: ElementKind,
                 options: TraceOptions = DEFAULT_OPTIONS) -> list[tuple[str, str]]:
    pairs = []
    targets = set(model.elements_of_kind(to_kind))
    for src in model.elements_of_kind(from_kind):
        reached = trace(model, src, FORWARD, options).ids
        pairs.extend((src, dst) for dst in reached if dst in targets)
    return pairs


def reachable_from(model: ArchitectureModel, roots: Iterable[str],
                   options: TraceOptions = DEFAULT_OPTIONS) -> set[str]:
    """Forward closure of several roots at once."""
    kinds = options.link_kinds
    seen = set(roots)
    stack = sorted(seen)
    while stack:
        eid = stack.pop()
        for neighbor, _ in _steps(model, eid, FORWARD, kinds):
            if neighbor not in seen:
                seen.add(neighbor)
                stack.append(neighbor)
    return seen


# -- seam coverage ----------------------------------------------------------


@dataclass(frozen=True)
class SeamCoverage:
    seam: Seam
    realized: tuple[str, ...]
    unrealized: tuple[str, ...]

    @property
    def numerator(self) -> int:
        return len(self.realized)

    @property
    def denominator(self) -> int:
        return len(self.realized) + len(self.unrealized)

    @property
    def ratio(self) -> float:
        return 1.0 if self.denominator == 0 else self.numerator / self.denominator


def module_exempt(model: ArchitectureModel, module_id: str) -> bool:
    """Modules owned only by external systems are not decomposed further."""
    owners = model.in_neighbors(module_id, L.OWNS_MODULE)
    return bool(owners) and all(model.kind_of(o) is K.EXTERNAL_SYSTEM for o in owners)


def seam_subjects(model: ArchitectureModel, seam: Seam) -> list[tuple[str, bool]]:
    """(element id, realized?) for every element a seam's gap rule checks.

    Seams 1-3 check their connecting elements.  The deployment seam checks
    functional components, since a gap there is a component with no node.
    """
    if seam.realization_link is L.DEPLOYS:
        return [(cid, bool(model.in_neighbors(cid, L.DEPLOYS)))
                for cid in model.elements_of_kind(K.FUNCTIONAL_COMPONENT)]
    subjects = []
    for eid in model.elements_of_kind(seam.connecting_kind):
        if seam.connecting_kind is K.SOFTWARE_MODULE and module_exempt(model, eid):
            continue
        subjects.append((eid, bool(model.out_neighbors(eid, seam.realization_link))))
    return subjects


def seam_coverage(model: ArchitectureModel, seam: Seam) -> SeamCoverage:
    subjects = seam_subjects(model, seam)
    return SeamCoverage(seam,
                        tuple(eid for eid, ok in subjects if ok),
                        tuple(eid for eid, ok in subjects if not ok))


def coverage(model: ArchitectureModel) -> dict[str, SeamCoverage]:
    """Seam token (``seam1`` .. ``seam4``) to coverage, in abstraction order."""
    return {seam.token: seam_coverage(model, seam) for seam in seam_catalog()}

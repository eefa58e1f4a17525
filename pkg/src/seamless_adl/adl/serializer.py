"""Canonical ADL text for a model.

Blocks come out grouped (processes, dialogs, components and external
systems, classes, nodes) and sorted by id inside each group, followed by
the ``bind`` statements.  Indentation is two spaces.
"""

from __future__ import annotations

from ..metamodel import ElementKind as K
from ..metamodel import LinkKind as L
from ..model import ArchitectureModel, Element
from .lowering import default_form_id

INDENT = "  "


def quote(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


class _Writer:
    def __init__(self, model: ArchitectureModel):
        self.model = model
        self.lines: list[str] = []

    def emit(self, depth: int, text: str) -> None:
        self.lines.append(INDENT * depth + text)

    def out(self, eid: str, kind: L) -> list[str]:
        return self.model.out_neighbors(eid, kind)

    def header(self, keyword: str, element: Element, suffix: str = "") -> str:
        return f"{keyword} {quote(element.name)} as {element.id}{suffix}"

    def open_block(self, depth: int, head: str, body) -> None:
        start = len(self.lines)
        self.emit(depth, head + " {")
        body(depth + 1)
        if len(self.lines) == start + 1:
            self.lines[start] = INDENT * depth + head + " {}"
        else:
            self.emit(depth, "}")

    # -- business ------------------------------------------------------

    def business(self, eid: str, depth: int) -> None:
        element = self.model.element(eid)
        if element.kind is K.BUSINESS_OPERATION:
            self.operation(element, depth)
            return
        keyword = "process" if element.kind is K.BUSINESS_PROCESS else "function"

        def body(d: int) -> None:
            for child in self.out(eid, L.DECOMPOSES):
                self.business(child, d)

        self.open_block(depth, self.header(keyword, element), body)

    def operation(self, element: Element, depth: int) -> None:
        suffix = " automated" if element.automated else ""

        def body(d: int) -> None:
            if "performer" in element.attributes:
                self.emit(d, f"performer {quote(element.attributes['performer'])}")
            for sid in self.out(element.id, L.HAS_SERVICE):
                self.service(self.model.element(sid), d)

        self.open_block(depth, self.header("operation", element, suffix), body)

    def service(self, element: Element, depth: int) -> None:
        head = "service " + (f"{quote(element.name)} " if element.name else "") + f"as {element.id}"

        def body(d: int) -> None:
            for aid in self.out(element.id, L.CONTAINS_AUTOFN):
                self.emit(d, self.header("auto_fn", self.model.element(aid)))

        self.open_block(depth, head, body)

    # -- functional ----------------------------------------------------

    def dialog(self, element: Element) -> None:
        eid = element.id
        model = self.model

        def body(d: int) -> None:
            sources = sorted(set(model.in_neighbors(eid, L.SVC_DIALOG))
                             | set(model.in_neighbors(eid, L.IMPLEMENTS)))
            if sources:
                self.emit(d, "implements " + ", ".join(sources))
            if "agent" in element.attributes:
                self.emit(d, f"agent {element.attributes['agent']}")
            for rid in self.out(eid, L.INPUT):
                self.emit(d, self.header("input resource", model.element(rid)))
            for rid in self.out(eid, L.OUTPUT):
                self.emit(d, self.header("output product", model.element(rid)))
            for ordinal, fid in enumerate(self.out(eid, L.HAS_FORM), start=1):
                form = model.element(fid)
                text = f"form {quote(form.name)}"
                if fid != default_form_id(eid, ordinal):
                    text += f" as {fid}"
                self.emit(d, text)
            for vid in self.out(eid, L.HAS_VIEWFN):
                vf = model.element(vid)
                self.emit(d, self.header("view_fn", vf) + f" category {vf.attributes['category']}")

        self.open_block(0, self.header("dialog", element), body)

    # -- component / data / technology ---------------------------------

    def component(self, element: Element) -> None:
        keyword = "component" if element.kind is K.FUNCTIONAL_COMPONENT else "external_system"

        def body(d: int) -> None:
            for mid in self.out(element.id, L.OWNS_MODULE):
                self.emit(d, self.header("module", self.model.element(mid)))

        self.open_block(0, self.header(keyword, element), body)

    def entity_class(self, element: Element) -> None:
        hosts = self.model.in_neighbors(element.id, L.HOSTS_CLASS)
        suffix = f" hosted_by {hosts[0]}" if hosts else ""

        def body(d: int) -> None:
            for mid in self.out(element.id, L.OWNS_METHOD):
                self.emit(d, self.header("method", self.model.element(mid)))

        self.open_block(0, self.header("class", element, suffix), body)

    def node(self, element: Element) -> None:
        def body(d: int) -> None:
            if "requirements" in element.attributes:
                self.emit(d, f"requirements {quote(element.attributes['requirements'])}")
            deployed = self.out(element.id, L.DEPLOYS)
            if deployed:
                self.emit(d, "deploys " + ", ".join(deployed))

        self.open_block(0, self.header("node", element), body)

    # -- document ------------------------------------------------------

    def document(self) -> str:
        model = self.model
        groups = [
            (model.elements_of_kind(K.BUSINESS_PROCESS), lambda e: self.business(e.id, 0)),
            (model.elements_of_kind(K.DIALOG), self.dialog),
            (sorted(model.elements_of_kind(K.FUNCTIONAL_COMPONENT)
                    + model.elements_of_kind(K.EXTERNAL_SYSTEM)), self.component),
            (model.elements_of_kind(K.ENTITY_CLASS), self.entity_class),
            (model.elements_of_kind(K.HARDWARE_NODE), self.node),
        ]
        for ids, write in groups:
            for eid in ids:
                if self.lines:
                    self.lines.append("")
                write(model.element(eid))
        binds = []
        for kind, source_kind in ((L.VF_MODULE, K.VIEW_FUNCTION), (L.MOD_METHOD, K.SOFTWARE_MODULE)):
            for src in model.elements_of_kind(source_kind):
                targets = self.out(src, kind)
                if targets:
                    binds.append(f"bind {src} -> {', '.join(targets)}")
        if binds:
            if self.lines:
                self.lines.append("")
            self.lines.extend(binds)
        return "\n".join(self.lines) + "\n" if self.lines else ""


def serialize(model: ArchitectureModel) -> str:
    return _Writer(model).document()

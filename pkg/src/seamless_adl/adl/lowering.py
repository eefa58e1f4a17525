"""Lower a parsed description into an :class:`ArchitectureModel`.

Lowering runs in two passes.  The first registers every declared element.
The second turns nesting, ``implements``, ``hosted_by``, ``deploys`` and
``bind`` statements into links, so references may point forward.  A model
is always produced; elements and links that fail their checks are left out
and reported.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..diagnostics import Diagnostic, Severity, SourceLocation
from ..metamodel import ElementKind as K
from ..metamodel import LinkKind as L
from ..metamodel import RELATIONS
from ..model import ArchitectureModel, Element, Link, ModelBuilder
from .ast import Decl, ModelAst, Ref

BLOCK_KINDS = {
    "process": K.BUSINESS_PROCESS,
    "function": K.BUSINESS_FUNCTION,
    "operation": K.BUSINESS_OPERATION,
    "service": K.OPERATIONAL_SERVICE,
    "auto_fn": K.AUTOMATED_FUNCTION,
    "dialog": K.DIALOG,
    "view_fn": K.VIEW_FUNCTION,
    "form": K.DIALOG_FORM,
    "input": K.INFORMATION_OBJECT,
    "output": K.INFORMATION_OBJECT,
    "component": K.FUNCTIONAL_COMPONENT,
    "external_system": K.EXTERNAL_SYSTEM,
    "module": K.SOFTWARE_MODULE,
    "class": K.ENTITY_CLASS,
    "method": K.CLASS_METHOD,
    "node": K.HARDWARE_NODE,
}

# parent keyword -> child keyword -> link induced by nesting
NESTING_LINKS = {
    "process": {"function": L.DECOMPOSES},
    "function": {"function": L.DECOMPOSES, "operation": L.DECOMPOSES},
    "operation": {"service": L.HAS_SERVICE},
    "service": {"auto_fn": L.CONTAINS_AUTOFN},
    "dialog": {"view_fn": L.HAS_VIEWFN, "input": L.INPUT, "output": L.OUTPUT,
               "form": L.HAS_FORM},
    "component": {"module": L.OWNS_MODULE},
    "external_system": {"module": L.OWNS_MODULE},
    "class": {"method": L.OWNS_METHOD},
}

BIND_LINKS = (L.VF_MODULE, L.MOD_METHOD)


def default_form_id(dialog_id: str, ordinal: int) -> str:
    """Id given to the ``ordinal``-th (1-based) form of a dialog when none is written."""
    return f"{dialog_id}_form" if ordinal == 1 else f"{dialog_id}_form{ordinal}"


@dataclass
class _PendingLink:
    kind: L | None  # None: decided from endpoint kinds (bind, implements)
    src: str
    dst: str
    location: SourceLocation
    statement: str


class Lowering:
    def __init__(self, ast: ModelAst):
        self.ast = ast
        self.builder = ModelBuilder()
        self.diagnostics: list[Diagnostic] = []
        self.pending: list[_PendingLink] = []

    def report(self, diag: Diagnostic | None) -> None:
        if diag is not None:
            self.diagnostics.append(diag)

    # -- pass 1: elements ----------------------------------------------

    def declare(self, decl: Decl, parent: Decl | None, parent_ok: bool) -> None:
        kind = BLOCK_KINDS[decl.keyword]
        attributes: dict[str, str] = {}
        automated = "automated" in decl.flags
        forms = 0
        for child in decl.children:
            if child.keyword in ("performer", "requirements", "agent"):
                attributes[child.keyword] = child.value
        if decl.keyword == "view_fn":
            attributes["category"] = decl.value
        element = Element(decl.id, kind, decl.name or "", attributes, automated,
                          decl.id_location or decl.location)
        diag = self.builder.add_element(element)
        self.report(diag)
        ok = diag is None
        if parent is not None and parent_ok and ok:
            link_kind = NESTING_LINKS[parent.keyword][decl.keyword]
            self.pending.append(_PendingLink(link_kind, parent.id, decl.id,
                                             decl.location, decl.keyword))
        for child in decl.children:
            if child.keyword == "form":
                forms += 1
                if child.id is None:
                    child.id = default_form_id(decl.id, forms)
            if child.keyword in BLOCK_KINDS:
                self.declare(child, decl, ok)
            elif ok:
                self.collect_references(decl, child)

    def collect_references(self, owner: Decl, stmt: Decl) -> None:
        if stmt.keyword == "implements":
            for ref in stmt.refs:
                self.pending.append(_PendingLink(None, ref.id, owner.id, ref.location, "implements"))
        elif stmt.keyword == "deploys":
            for ref in stmt.refs:
                self.pending.append(_PendingLink(L.DEPLOYS, owner.id, ref.id, ref.location, "deploys"))
        elif stmt.keyword == "hosted_by":
            for ref in stmt.refs:
                self.pending.append(_PendingLink(L.HOSTS_CLASS, ref.id, owner.id, ref.location, "hosted_by"))

    def collect_bind(self, decl: Decl) -> None:
        source: Ref = decl.refs[0]
        for target in decl.refs[1:]:
            self.pending.append(_PendingLink(None, source.id, target.id, target.location, "bind"))

    # -- pass 2: links -------------------------------------------------

    def resolve_kind(self, pending: _PendingLink) -> L | None:
        src = self.builder.get(pending.src)
        dst = self.builder.get(pending.dst)
        missing = [ref for ref, el in ((pending.src, src), (pending.dst, dst)) if el is None]
        if missing:
            self.report(Diagnostic(
                "E-REF-UNRES", Severity.ERROR, tuple(missing),
                f"unresolved reference {', '.join(missing)} in {pending.statement}",
                pending.location))
            return None
        if pending.statement == "bind":
            kinds = [k for k in BIND_LINKS if (src.kind, dst.kind) in RELATIONS[k]]
            if len(kinds) != 1:
                self.report(Diagnostic(
                    "E-BIND-AMBIG", Severity.ERROR, (pending.src, pending.dst),
                    f"bind {pending.src} -> {pending.dst}: no link kind connects "
                    f"{src.kind.value} to {dst.kind.value}",
                    pending.location))
                return None
            return kinds[0]
        if pending.statement == "implements":
            if src.kind is K.AUTOMATED_FUNCTION:
                return L.IMPLEMENTS
            if src.kind is K.OPERATIONAL_SERVICE:
                return L.SVC_DIALOG
            self.report(Diagnostic(
                "E-LINK-META", Severity.ERROR, (pending.src, pending.dst),
                f"dialog {pending.dst} cannot implement {src.kind.value} {pending.src}; "
                "expected an operational service or automated function",
                pending.location))
            return None
        return pending.kind

    def link_all(self) -> None:
        service_of: dict[str, str] = {
            p.dst: p.src for p in self.pending if p.kind is L.CONTAINS_AUTOFN}
        implied: set[tuple[str, str, str]] = set()
        for pending in self.pending:
            kind = self.resolve_kind(pending)
            if kind is None:
                continue
            link = Link(kind, pending.src, pending.dst, pending.location)
            diag = self.builder.add_link(link)
            if diag is not None and not (diag.code == "I-DUP-LINK" and link.key in implied):
                self.report(diag)
            if kind is L.IMPLEMENTS and diag is None and pending.src in service_of:
                # A dialog implementing an automated function also realizes
                # the service that contains it.
                service_link = Link(L.SVC_DIALOG, service_of[pending.src], pending.dst,
                                    pending.location)
                if not self.builder.has_link(L.SVC_DIALOG, service_link.src, service_link.dst):
                    self.report(self.builder.add_link(service_link))
                    implied.add(service_link.key)

    def run(self) -> tuple[ArchitectureModel, list[Diagnostic]]:
        for decl in self.ast.declarations:
            if decl.keyword == "bind":
                continue
            self.declare(decl, None, False)
        for decl in self.ast.declarations:
            if decl.keyword == "bind":
                self.collect_bind(decl)
        self.link_all()
        return self.builder.freeze(), self.diagnostics


def lower(ast: ModelAst) -> tuple[ArchitectureModel, list[Diagnostic]]:
    return Lowering(ast).run()

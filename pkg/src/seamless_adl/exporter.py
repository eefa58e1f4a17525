"""Renderers: diagnostics, DOT and PlantUML diagrams, JSON interchange and
the generated Markdown architecture document.

Every function here is pure and produces identical bytes for identical input.
"""

from __future__ import annotations

import json
from typing import Iterable, Mapping, Sequence

from .diagnostics import Diagnostic, Severity, SourceLocation
from .metamodel import ElementKind, Layer, LinkKind, find_seam, layer_of
from .model import ArchitectureModel, Element, Link, build_model
from .tracer import SeamCoverage, TraceResult, trace_matrix

K = ElementKind
L = LinkKind


class ModelImportError(ValueError):
    """Raised when a JSON document is not a valid model."""


# -- diagnostics -------------------------------------------------------------


def _location_json(location: SourceLocation | None):
    if location is None:
        return None
    return {"file": location.file, "line": location.line, "column": location.column}


def diagnostic_to_text(diag: Diagnostic) -> str:
    line = f"{diag.severity.value} {diag.code} {','.join(diag.subjects)}: {diag.message}"
    if diag.location is not None:
        line += f" [{diag.location}]"
    return line


def render_diagnostics(diagnostics: Sequence[Diagnostic], fmt: str = "text") -> str:
    if fmt == "text":
        return "".join(diagnostic_to_text(d) + "\n" for d in diagnostics)
    if fmt == "json":
        return json.dumps([
            {"code": d.code, "severity": d.severity.value, "subjects": list(d.subjects),
             "message": d.message, "location": _location_json(d.location)}
            for d in diagnostics], indent=2)
    raise ValueError(f"diagnostics cannot be rendered as {fmt!r}")


# -- DOT ---------------------------------------------------------------------


def _dot_quote(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"').replace("\n", "\\n") + '"'


def _dot(name: str, model: ArchitectureModel, ids: Iterable[str], links: Iterable[Link]) -> str:
    lines = [f"digraph {_dot_quote(name)} {{", "  rankdir=TB;", "  node [shape=box];"]
    for eid in sorted(ids):
        element = model.element(eid)
        label = f"{element.kind.value}: {element.name}"
        lines.append(f"  {_dot_quote(eid)} [label={_dot_quote(label)}];")
    for link in sorted(set(links), key=lambda lk: (lk.src, lk.dst, lk.kind.value)):
        lines.append(f"  {_dot_quote(link.src)} -> {_dot_quote(link.dst)} "
                     f"[label={_dot_quote(link.kind.value)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def _layer(token: str) -> Layer | None:
    for layer in Layer:
        if token.lower() in (layer.value.lower(), layer.name.lower()):
            return layer
    return None


def export_dot(model: ArchitectureModel, scope: str = "all") -> str:
    """Graphviz digraph of the whole model, one layer (``business``, ...) or
    one seam (``seam1`` .. ``seam4``)."""
    if scope == "all":
        return _dot("architecture", model, model.elements, model.links)
    layer = _layer(scope)
    if layer is not None:
        ids = {eid for eid, el in model.elements.items() if layer_of(el.kind) is layer}
        links = [lk for lk in model.links if lk.src in ids and lk.dst in ids]
        return _dot(f"{layer.value} layer", model, ids, links)
    try:
        seam = find_seam(scope)
    except ValueError:
        raise ValueError(f"unknown scope {scope!r}; expected all, a layer name or seam1..seam4") from None
    links = [lk for lk in model.links if lk.kind is seam.realization_link]
    ids = set(model.elements_of_kind(seam.connecting_kind))
    for link in links:
        ids.update((link.src, link.dst))
    return _dot(seam.token, model, ids, links)


def trace_to_dot(model: ArchitectureModel, result: TraceResult) -> str:
    return _dot(f"trace {result.direction} {result.root}", model, result.ids, result.edges)


def trace_to_text(result: TraceResult) -> str:
    lines = [f"{result.direction} trace from {result.root}"]
    for layer, ids in result.reached.items():
        lines.append(f"{layer.value}: {', '.join(ids)}")
    return "\n".join(lines) + "\n"


def trace_to_json(result: TraceResult) -> str:
    return json.dumps({
        "root": result.root,
        "direction": result.direction,
        "reached": {layer.value: list(ids) for layer, ids in result.reached.items()},
        "edges": [{"kind": lk.kind.value, "src": lk.src, "dst": lk.dst} for lk in result.edges],
    }, indent=2)


# -- PlantUML ----------------------------------------------------------------


def _puml_quote(text: str) -> str:
    return '"' + text.replace('"', "'") + '"'


def export_plantuml_deployment(model: ArchitectureModel) -> str:
    """Deployment diagram: components nested in the nodes that host them.

    Components deployed nowhere are drawn at top level so the gap shows.
    """
    lines = ["@startuml"]
    deployed: set[str] = set()

    def component_line(cid: str, alias: str, indent: str) -> str:
        element = model.element(cid)
        stereo = " <<external>>" if element.kind is K.EXTERNAL_SYSTEM else ""
        return f"{indent}component {_puml_quote(element.name or cid)} as {alias}{stereo}"

    for nid in model.elements_of_kind(K.HARDWARE_NODE):
        node = model.element(nid)
        hosted = model.out_neighbors(nid, L.DEPLOYS)
        head = f"node {_puml_quote(node.name or nid)} as {nid}"
        if hosted:
            lines.append(head + " {")
            for cid in hosted:
                # A component on several nodes needs a distinct alias per node.
                alias = cid if cid not in deployed else f"{cid}__{nid}"
                lines.append(component_line(cid, alias, "  "))
                deployed.add(cid)
            lines.append("}")
        else:
            lines.append(head)
        if "requirements" in node.attributes:
            lines.append(f"note right of {nid} : {node.attributes['requirements']}")
    components = sorted(model.elements_of_kind(K.FUNCTIONAL_COMPONENT)
                        + model.elements_of_kind(K.EXTERNAL_SYSTEM))
    for cid in components:
        if cid not in deployed:
            lines.append(component_line(cid, cid, ""))
    lines.append("@enduml")
    return "\n".join(lines) + "\n"


# -- JSON interchange --------------------------------------------------------


def model_to_json(model: ArchitectureModel) -> str:
    elements = [{
        "id": el.id,
        "kind": el.kind.value,
        "name": el.name,
        "attributes": dict(el.attributes),
        "automated": el.automated,
        "location": _location_json(el.location),
    } for el in model.elements.values()]
    links = [{"kind": lk.kind.value, "src": lk.src, "dst": lk.dst} for lk in model.sorted_links()]
    return json.dumps({"elements": elements, "links": links},
                      separators=(",", ":"), ensure_ascii=False)


def model_from_json(text: str) -> ArchitectureModel:
    """Inverse of :func:`model_to_json`.  Raises ``ValueError`` on bad input."""
    try:
        data = json.loads(text)
        elements = []
        for item in data["elements"]:
            loc = item.get("location")
            elements.append(Element(
                item["id"], ElementKind.parse(item["kind"]), item.get("name", ""),
                item.get("attributes", {}), bool(item.get("automated", False)),
                SourceLocation(loc["file"], loc["line"], loc["column"]) if loc else None))
        links = [Link(LinkKind(item["kind"]), item["src"], item["dst"]) for item in data["links"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise ModelImportError(f"invalid model JSON: {exc}") from exc
    model, diagnostics = build_model(elements, links)
    errors = [d for d in diagnostics if d.severity is Severity.ERROR]
    if errors:
        raise ModelImportError("invalid model JSON: " + "; ".join(d.message for d in errors))
    return model


# -- Markdown document -------------------------------------------------------


def _none(lines: list[str], items: Sequence) -> None:
    if not items:
        lines.append("_none_")


def render_archdoc(model: ArchitectureModel, diagnostics: Sequence[Diagnostic],
                   coverage: Mapping[str, SeamCoverage]) -> str:
    el = model.element
    out = lambda eid, kind: model.out_neighbors(eid, kind)  # noqa: E731
    lines = ["# Architecture Description", ""]

    lines += ["## Business Architecture", ""]
    processes = model.elements_of_kind(K.BUSINESS_PROCESS)
    _none(lines, processes)

    def tree(eid: str, depth: int) -> None:
        element = el(eid)
        extra = ""
        if element.kind is K.BUSINESS_OPERATION:
            flags = ["automated"] if element.automated else []
            if "performer" in element.attributes:
                flags.append(f"performer: {element.attributes['performer']}")
            extra = f" ({'; '.join(flags)})" if flags else ""
        lines.append(f"{'  ' * depth}- {element.kind.value} `{eid}` {element.name}{extra}")
        for child in out(eid, L.DECOMPOSES):
            tree(child, depth + 1)

    for pid in processes:
        tree(pid, 0)

    lines += ["", "## Operational Services", ""]
    operations = [oid for oid in model.elements_of_kind(K.BUSINESS_OPERATION)
                  if out(oid, L.HAS_SERVICE)]
    _none(lines, operations)
    for oid in operations:
        for sid in out(oid, L.HAS_SERVICE):
            lines.append(f"- `{oid}` {el(oid).name} -> service `{sid}`")
            for aid in out(sid, L.CONTAINS_AUTOFN):
                lines.append(f"  - automated function `{aid}` {el(aid).name}")

    lines += ["", "## Functional Architecture", ""]
    dialogs = model.elements_of_kind(K.DIALOG)
    _none(lines, dialogs)
    for did in dialogs:
        dialog = el(did)
        lines.append(f"### Dialog `{did}` {dialog.name}")
        lines.append("")
        lines.append(f"- agent: {dialog.attributes.get('agent', 'unspecified')}")
        realizes = sorted(set(model.in_neighbors(did, L.SVC_DIALOG))
                          | set(model.in_neighbors(did, L.IMPLEMENTS)))
        lines.append(f"- implements: {', '.join(realizes) or 'none'}")
        for label, kind in (("source resource", L.INPUT), ("target product", L.OUTPUT)):
            names = [f"`{rid}` {el(rid).name}" for rid in out(did, kind)]
            lines.append(f"- {label}: {', '.join(names) or 'none'}")
        forms = [el(fid).name for fid in out(did, L.HAS_FORM)]
        lines.append(f"- form: {', '.join(forms) or 'none'}")
        lines.append("- view functions:")
        vfs = out(did, L.HAS_VIEWFN)
        if not vfs:
            lines.append("  - none")
        for vid in vfs:
            lines.append(f"  - `{vid}` {el(vid).name} [{el(vid).attributes.get('category', '?')}]"
                         f" -> {', '.join(out(vid, L.VF_MODULE)) or 'no modules'}")
        lines.append("")

    lines += ["## Component Architecture", ""]
    components = sorted(model.elements_of_kind(K.FUNCTIONAL_COMPONENT)
                        + model.elements_of_kind(K.EXTERNAL_SYSTEM))
    _none(lines, components)
    for cid in components:
        kind = "external system" if el(cid).kind is K.EXTERNAL_SYSTEM else "component"
        lines.append(f"- {kind} `{cid}` {el(cid).name}")
        for mid in out(cid, L.OWNS_MODULE):
            lines.append(f"  - module `{mid}` {el(mid).name}"
                         f" -> {', '.join(out(mid, L.MOD_METHOD)) or 'no methods'}")

    lines += ["", "## Data Architecture", ""]
    classes = model.elements_of_kind(K.ENTITY_CLASS)
    _none(lines, classes)
    for kid in classes:
        hosts = model.in_neighbors(kid, L.HOSTS_CLASS)
        lines.append(f"- class `{kid}` {el(kid).name}"
                     + (f" (hosted by {', '.join(hosts)})" if hosts else ""))
        for mid in out(kid, L.OWNS_METHOD):
            lines.append(f"  - method `{mid}` {el(mid).name}")

    lines += ["", "## Deployment", ""]
    nodes = model.elements_of_kind(K.HARDWARE_NODE)
    _none(lines, nodes)
    for nid in nodes:
        node = el(nid)
        req = node.attributes.get("requirements")
        lines.append(f"- node `{nid}` {node.name}" + (f" (requirements: {req})" if req else ""))
        for cid in out(nid, L.DEPLOYS):
            lines.append(f"  - deploys `{cid}` {el(cid).name}")

    lines += ["", "## Traceability", ""]
    matrix = trace_matrix(model, K.BUSINESS_OPERATION, K.CLASS_METHOD)
    if matrix:
        lines += ["| Business operation | Class method |", "| --- | --- |"]
        lines += [f"| {src} | {dst} |" for src, dst in matrix]
    else:
        lines.append("_none_")

    lines += ["", "## Validation Summary", ""]
    lines += ["| Seam | Connecting element | Realized | Coverage |", "| --- | --- | --- | --- |"]
    for token, cov in coverage.items():
        lines.append(f"| {token} | {cov.seam.connecting_kind.value} | "
                     f"{cov.numerator}/{cov.denominator} | {cov.ratio:.2f} |")
    lines.append("")
    counts = {sev: sum(1 for d in diagnostics if d.severity is sev) for sev in Severity}
    lines.append(", ".join(f"{counts[sev]} {sev.value}(s)" for sev in Severity))
    by_code: dict[str, int] = {}
    for diag in diagnostics:
        by_code[diag.code] = by_code.get(diag.code, 0) + 1
    for code in sorted(by_code):
        lines.append(f"- {code}: {by_code[code]}")
    return "\n".join(lines) + "\n"

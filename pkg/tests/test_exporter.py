import json
import re

import pytest

from conftest import drop_statement
from generators import generate_model
from seamless_adl.adl import load
from seamless_adl.diagnostics import Diagnostic, Severity, SourceLocation
from seamless_adl.exporter import (ModelImportError, export_dot, export_plantuml_deployment,
                                   model_from_json, model_to_json, render_archdoc,
                                   render_diagnostics)
from seamless_adl.model import EMPTY_MODEL, structurally_equal
from seamless_adl.tracer import coverage
from seamless_adl.validator import validate

QUOTED = r'"(?:[^"\\]|\\.)*"'
DOT_NODE = re.compile(rf"^  {QUOTED} \[label={QUOTED}\];$")
DOT_EDGE = re.compile(rf"^  {QUOTED} -> {QUOTED} \[label={QUOTED}\];$")
DOT_HEADER = re.compile(rf"^digraph {QUOTED} \{{$")


def lint_dot(text):
    """Line grammar for the DOT subset we emit; returns (nodes, edges)."""
    lines = text.splitlines()
    assert DOT_HEADER.match(lines[0]), lines[0]
    assert lines[-1] == "}"
    nodes = edges = 0
    for line in lines[1:-1]:
        if line in ("  rankdir=TB;", "  node [shape=box];"):
            continue
        if DOT_EDGE.match(line):
            edges += 1
        elif DOT_NODE.match(line):
            nodes += 1
        else:
            raise AssertionError(f"bad DOT line: {line!r}")
    return nodes, edges


PUML_LINES = [
    re.compile(r'^node "[^"]*" as \w+( \{)?$'),
    re.compile(r'^(  )?component "[^"]*" as \w+( <<external>>)?$'),
    re.compile(r"^note right of \w+ : .*$"),
    re.compile(r"^\}$"),
]


def lint_plantuml(text):
    lines = text.splitlines()
    assert lines[0] == "@startuml" and lines[-1] == "@enduml"
    depth = 0
    for line in lines[1:-1]:
        assert any(p.match(line) for p in PUML_LINES), line
        depth += line.endswith("{") - (line == "}")
        assert depth in (0, 1)
    assert depth == 0
    return lines[1:-1]


R_VF = Diagnostic("R-VF-NOMOD", Severity.ERROR, ("VF1",), "view function VF1 is not decomposed",
                  SourceLocation("m.adl", 3, 5))


def test_render_empty():
    assert render_diagnostics([], "text") == ""
    assert render_diagnostics([], "json") == "[]"


def test_render_text_line():
    assert render_diagnostics([R_VF]).startswith("error R-VF-NOMOD VF1:")
    assert render_diagnostics([R_VF]).rstrip().endswith("[m.adl:3:5]")


def test_render_json():
    data = json.loads(render_diagnostics([R_VF], "json"))
    assert data == [{"code": "R-VF-NOMOD", "severity": "error", "subjects": ["VF1"],
                     "message": "view function VF1 is not decomposed",
                     "location": {"file": "m.adl", "line": 3, "column": 5}}]


def test_render_deterministic(m0_text):
    model, _ = load(drop_statement(m0_text, "bind VF1 -> M1\n"))
    diags = validate(model)
    for fmt in ("text", "json"):
        assert render_diagnostics(diags, fmt) == render_diagnostics(diags, fmt)


def test_dot_empty():
    assert lint_dot(export_dot(EMPTY_MODEL)) == (0, 0)


def test_dot_m0(m0):
    assert lint_dot(export_dot(m0)) == (19, 24)
    assert '"VF2" -> "M2" [label="VF_MODULE"];' in export_dot(m0)


def test_dot_seam2_shape(m0):
    text = export_dot(m0, "seam2")
    assert lint_dot(text) == (4, 3)
    for eid in ("VF1", "VF2", "M1", "M2"):
        assert f'  "{eid}" [label=' in text


def test_dot_layer_scope(m0):
    text = export_dot(m0, "data")
    assert lint_dot(text) == (3, 2)
    with pytest.raises(ValueError):
        export_dot(m0, "bogus")


def test_dot_escapes_names():
    model = generate_model(0)
    lint_dot(export_dot(model))


def test_plantuml_m0(m0):
    body = lint_plantuml(export_plantuml_deployment(m0))
    assert body == ['node "App Server" as N1 {', '  component "Order Management" as C1', "}",
                    "note right of N1 : 16GB RAM"]


def test_plantuml_undeployed_component_at_top_level(m0_text):
    model, _ = load(drop_statement(m0_text, "  deploys C1\n"))
    body = lint_plantuml(export_plantuml_deployment(model))
    assert 'component "Order Management" as C1' in body
    assert 'node "App Server" as N1' in body


def test_plantuml_empty():
    assert export_plantuml_deployment(EMPTY_MODEL) == "@startuml\n@enduml\n"


def test_plantuml_generated_models_lint():
    for seed in range(5):
        lint_plantuml(export_plantuml_deployment(generate_model(seed)))


def test_json_empty():
    assert model_to_json(EMPTY_MODEL) == '{"elements":[],"links":[]}'


def test_json_m0(m0):
    data = json.loads(model_to_json(m0))
    assert len(data["elements"]) == 19 and len(data["links"]) == 24
    assert [e["id"] for e in data["elements"]] == sorted(e["id"] for e in data["elements"])
    keys = [(lk["kind"], lk["src"], lk["dst"]) for lk in data["links"]]
    assert keys == sorted(keys)
    assert structurally_equal(model_from_json(model_to_json(m0)), m0)


def test_json_round_trip_keeps_locations(m0):
    again = model_from_json(model_to_json(m0))
    assert again.element("VF1").location == m0.element("VF1").location


def test_json_import_rejects_bad_input():
    with pytest.raises(ModelImportError):
        model_from_json('{"elements": [{"id": "X", "kind": "Widget"}], "links": []}')
    with pytest.raises(ModelImportError):
        model_from_json('{"elements": [], "links": [{"kind": "DEPLOYS", "src": "a", "dst": "b"}]}')


def test_archdoc_m0(m0):
    doc = render_archdoc(m0, validate(m0), coverage(m0))
    headings = [line for line in doc.splitlines() if line.startswith("## ")]
    assert headings == ["## Business Architecture", "## Operational Services",
                        "## Functional Architecture", "## Component Architecture",
                        "## Data Architecture", "## Deployment", "## Traceability",
                        "## Validation Summary"]
    trace_section = doc.split("## Traceability")[1].split("##")[0]
    assert "| O1 | MM1 |" in trace_section and "| O1 | MM2 |" in trace_section
    assert doc == render_archdoc(m0, validate(m0), coverage(m0))


def test_archdoc_empty():
    doc = render_archdoc(EMPTY_MODEL, validate(EMPTY_MODEL), coverage(EMPTY_MODEL))
    sections = doc.split("\n## ")[1:]
    assert len(sections) == 8
    for section in sections[:7]:
        assert "_none_" in section

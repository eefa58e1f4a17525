import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import drop_statement
from generators import generate_model
from seamless_adl.adl import load, lower, parse, serialize
from seamless_adl.adl.ast import TOP_LEVEL
from seamless_adl.adl.parser import tokenize
from seamless_adl.diagnostics import SourceLocation
from seamless_adl.metamodel import ElementKind as K
from seamless_adl.metamodel import LinkKind as L
from seamless_adl.model import Element, build_model, structurally_equal


def codes(diagnostics):
    return [d.code for d in diagnostics]


# -- parse -------------------------------------------------------------------


def test_empty_input():
    ast, diagnostics = parse("", "empty.adl")
    assert ast.declarations == [] and diagnostics == []


def test_m0_declaration_counts(m0_text, manifest):
    ast, diagnostics = parse(m0_text, "m0.adl")
    assert diagnostics == []
    for keyword, count in manifest["declarations"].items():
        assert ast.count(keyword) == count, keyword
    assert len(ast.declarations) == sum(manifest["declarations"].values())


def test_unterminated_block_reports_at_eof():
    text = 'process "X" as P1 {'
    ast, diagnostics = parse(text, "x.adl")
    assert codes(diagnostics) == ["E-SYNTAX"]
    assert diagnostics[0].location == SourceLocation("x.adl", 1, len(text) + 1)


def test_recovery_continues_with_next_block():
    text = ('process "A" as P1 { oops }\n'
            'component "C" as C1 { module "m" as M1 }\n'
            'node "N" as N1 { deploys C1 }\n')
    ast, diagnostics = parse(text, "r.adl")
    assert codes(diagnostics) == ["E-SYNTAX"]
    assert diagnostics[0].location.line == 1
    assert [d.keyword for d in ast.declarations] == ["component", "node"]


def test_lexer_errors_are_syntax_errors():
    _, diagnostics = parse('dialog "D as D1 {}\nnode "N" as N1 { $ }', "l.adl")
    assert codes(diagnostics) == ["E-SYNTAX", "E-SYNTAX"]
    assert "unterminated string" in diagnostics[0].message
    assert "unexpected character" in diagnostics[1].message


def test_invalid_utf8():
    ast, diagnostics = parse(b'process "\xff" as P1 {}', "bad.adl")
    assert codes(diagnostics) == ["E-ENCODING"]
    assert diagnostics[0].location.column == 10
    assert ast.declarations == []


def test_string_escapes_and_comments():
    text = 'process "say \\"hi\\" \\\\ bye" as P1 { # trailing comment\n}\n'
    ast, diagnostics = parse(text)
    assert diagnostics == []
    assert ast.declarations[0].name == 'say "hi" \\ bye'


def test_bad_category_and_agent():
    _, diagnostics = parse('dialog "D" as D1 { view_fn "v" as V1 category fancy }')
    assert codes(diagnostics) == ["E-SYNTAX"]
    _, diagnostics = parse('dialog "D" as D1 { agent robot }')
    assert codes(diagnostics) == ["E-SYNTAX"]


def test_operation_accepts_one_service():
    text = ('process "P" as P1 { function "F" as F1 { operation "O" as O1 automated {'
            ' service as S1 {} service as S2 {} } } }')
    _, diagnostics = parse(text)
    assert codes(diagnostics) == ["E-SYNTAX"]


@settings(max_examples=150, deadline=None)
@given(st.data())
def test_syntax_errors_bounded_by_blocks(m0_text, data):
    # Corrupt the fixture at random and check the recovery bound.
    chars = list(m0_text)
    for _ in range(data.draw(st.integers(1, 6))):
        pos = data.draw(st.integers(0, len(chars) - 1))
        chars[pos] = data.draw(st.sampled_from(list('{}",$->a \n')))
    text = "".join(chars)
    _, diagnostics = parse(text)
    top_level = sum(1 for t in tokenize(text, "t") if t.kind == "IDENT" and t.value in TOP_LEVEL)
    assert sum(d.code == "E-SYNTAX" for d in diagnostics) <= top_level + 1


@given(st.text(max_size=200))
def test_parse_never_raises(text):
    parse(text)


# -- lower -------------------------------------------------------------------


def test_m0_lowers_to_manifest(m0, manifest):
    assert {eid: el.kind.value for eid, el in m0.elements.items()} == manifest["elements"]
    assert sorted(link.key for link in m0.links) == sorted(map(tuple, manifest["links"]))
    assert len(m0) == 19 and len(m0.links) == 24


def test_m0_attributes(m0):
    assert m0.element("O1").automated and not m0.element("O2").automated
    assert m0.element("O1").attributes["performer"] == "Sales Clerk"
    assert m0.element("D1").attributes["agent"] == "user"
    assert m0.element("VF1").attributes["category"] == "precondition"
    assert m0.element("VF2").attributes["category"] == "io"
    assert m0.element("N1").attributes["requirements"] == "16GB RAM"
    assert m0.element("D1_form").name == "order_entry"


def test_duplicate_id_cites_both_locations():
    text = 'process "A" as P1 {}\nprocess "B" as P1 {}\n'
    model, diagnostics = load(text, "d.adl")
    dup = [d for d in diagnostics if d.code == "E-ID-DUP"]
    assert len(dup) == 1
    assert dup[0].location == SourceLocation("d.adl", 2, 16)
    assert "d.adl:1:16" in dup[0].message
    assert model.element("P1").name == "A"


def test_bind_without_legal_link_kind():
    text = 'process "P" as P1 {}\ncomponent "C" as C1 { module "m" as M1 }\nbind P1 -> M1\n'
    _, diagnostics = load(text, "b.adl")
    assert codes(diagnostics) == ["E-BIND-AMBIG"]
    assert diagnostics[0].location == SourceLocation("b.adl", 3, 12)


def test_unresolved_reference():
    text = 'component "C" as C1 { module "m" as M1 }\nbind M1 -> MM9\n'
    model, diagnostics = load(text, "u.adl")
    assert codes(diagnostics) == ["E-REF-UNRES"]
    assert diagnostics[0].subjects == ("MM9",)
    assert diagnostics[0].location.line == 2
    assert len(model) == 2


def test_implements_wrong_kind():
    text = 'dialog "D" as D1 { implements C1 }\ncomponent "C" as C1 {}\n'
    _, diagnostics = load(text)
    assert codes(diagnostics) == ["E-LINK-META"]


def test_deploys_wrong_kind():
    text = 'class "K" as K1 { method "m" as MM1 }\nnode "N" as N1 { deploys MM1 }\n'
    _, diagnostics = load(text)
    assert codes(diagnostics) == ["E-LINK-META"]


def test_implementing_a_function_links_its_service():
    text = ('process "P" as P1 { function "F" as F1 { operation "O" as O1 automated {'
            ' service as S1 { auto_fn "a" as A1 } } } }\n'
            'dialog "D" as D1 { implements A1 }\n')
    model, diagnostics = load(text)
    assert diagnostics == []
    assert model.out_neighbors("S1", L.SVC_DIALOG) == ["D1"]
    assert model.out_neighbors("A1", L.IMPLEMENTS) == ["D1"]


def test_duplicate_bind_is_info():
    text = ('dialog "D" as D1 { view_fn "v" as VF1 category io }\n'
            'component "C" as C1 { module "m" as M1 }\n'
            'bind VF1 -> M1\nbind VF1 -> M1\n')
    model, diagnostics = load(text)
    assert codes(diagnostics) == ["I-DUP-LINK"]
    assert model.out_neighbors("VF1", L.VF_MODULE) == ["M1"]


def test_lowering_is_deterministic(m0_text):
    first = lower(parse(m0_text, "m0.adl")[0])
    second = lower(parse(m0_text, "m0.adl")[0])
    assert first[1] == second[1]
    assert [lk.key for lk in first[0].links] == [lk.key for lk in second[0].links]


def test_forward_references_resolve():
    text = ('node "N" as N1 { deploys C1 }\n'
            'component "C" as C1 {}\n')
    model, diagnostics = load(text)
    assert diagnostics == []
    assert model.out_neighbors("N1", L.DEPLOYS) == ["C1"]


# -- serialize ---------------------------------------------------------------


def test_serialize_empty_model():
    model, _ = build_model([], [])
    assert serialize(model) == ""


def test_m0_round_trip(m0):
    text = serialize(m0)
    again, diagnostics = load(text, "rt.adl")
    assert diagnostics == []
    assert len(again) == 19 and len(again.links) == 24
    assert structurally_equal(m0, again)
    assert serialize(again) == text


def test_serialization_sorted_by_id():
    elements = [Element(eid, K.HARDWARE_NODE, eid.lower()) for eid in ("N3", "N2", "N1")]
    model, _ = build_model(elements, [])
    text = serialize(model)
    assert text.index("as N1") < text.index("as N2") < text.index("as N3")


def test_serialization_uses_two_space_indent(m0):
    lines = serialize(m0).splitlines()
    assert '  function "Accept Order" as F1 {' in lines
    assert '    operation "Register Order" as O1 automated {' in lines


def test_explicit_form_id_survives():
    text = 'dialog "D" as D1 { agent user form "main" as FORM_A form "side" }\n'
    model, diagnostics = load(text)
    assert diagnostics == []
    assert sorted(model.out_neighbors("D1", L.HAS_FORM)) == ["D1_form2", "FORM_A"]
    again, _ = load(serialize(model))
    assert structurally_equal(model, again)


@pytest.mark.parametrize("seed", range(12))
def test_generated_round_trip(seed):
    model = generate_model(seed, gap_rate=0.1 * (seed % 3))
    again, diagnostics = load(serialize(model))
    assert [d for d in diagnostics if d.is_error] == []
    assert structurally_equal(model, again)

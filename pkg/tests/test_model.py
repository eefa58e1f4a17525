import pytest

from seamless_adl.metamodel import ElementKind as K
from seamless_adl.metamodel import LinkKind as L
from seamless_adl.model import (ArchitectureModel, Element, Link, ModelBuilder,
                                UnknownElementError)


def test_add_element():
    builder = ModelBuilder()
    assert builder.add_element(Element("P1", K.BUSINESS_PROCESS, "p")) is None
    assert builder.element_count == 1
    diag = builder.add_element(Element("P1", K.BUSINESS_PROCESS, "again"))
    assert diag.code == "E-ID-DUP"
    assert builder.element_count == 1


def test_add_all_m0_elements(m0):
    builder = ModelBuilder()
    for element in m0.elements.values():
        assert builder.add_element(element) is None
    assert builder.element_count == len(m0) == 19


@pytest.fixture
def m0_builder(m0):
    builder = ModelBuilder()
    for element in m0.elements.values():
        builder.add_element(element)
    return builder


def test_add_link_legal(m0_builder):
    assert m0_builder.add_link(Link(L.DECOMPOSES, "P1", "F1")) is None


def test_add_link_illegal_triple(m0_builder):
    assert m0_builder.add_link(Link(L.DEPLOYS, "N1", "MM1")).code == "E-LINK-META"


def test_add_link_unknown_endpoint(m0_builder):
    diag = m0_builder.add_link(Link(L.VF_MODULE, "VF2", "M9"))
    assert diag.code == "E-REF-UNRES"


def test_duplicate_link_deduplicated(m0_builder):
    m0_builder.add_link(Link(L.DECOMPOSES, "P1", "F1"))
    diag = m0_builder.add_link(Link(L.DECOMPOSES, "P1", "F1"))
    assert diag.code == "I-DUP-LINK"
    assert len(m0_builder.freeze().links) == 1


def test_frozen_builder_rejects_changes():
    builder = ModelBuilder()
    builder.freeze()
    with pytest.raises(RuntimeError):
        builder.add_element(Element("P1", K.BUSINESS_PROCESS))


def test_neighbors(m0):
    assert m0.out_neighbors("O1", L.HAS_SERVICE) == ["S1"]
    assert m0.out_neighbors("VF2", L.VF_MODULE) == ["M1", "M2"]
    assert m0.in_neighbors("P1") == []
    assert m0.out_neighbors("D1") == ["D1_form", "R1", "R2", "VF1", "VF2"]
    with pytest.raises(UnknownElementError) as err:
        m0.out_neighbors("X9")
    assert err.value.code == "E-UNKNOWN-ID"


def test_elements_of_kind(m0):
    assert m0.elements_of_kind(K.BUSINESS_OPERATION) == ["O1", "O2"]
    assert m0.elements_of_kind(K.HARDWARE_NODE) == ["N1"]
    assert ArchitectureModel({}, ()).elements_of_kind(K.DIALOG) == []


def test_index_link_coherence(m0):
    out_total = in_total = 0
    for link in m0.links:
        assert link.dst in m0.out_neighbors(link.src, link.kind)
        assert link.src in m0.in_neighbors(link.dst, link.kind)
    for eid in m0.elements:
        for kind in L:
            out_total += len(m0.out_neighbors(eid, kind))
            in_total += len(m0.in_neighbors(eid, kind))
    assert out_total == in_total == len(m0.links)


def test_listings_sorted(m0):
    assert list(m0.elements) == sorted(m0.elements)
    for eid in m0.elements:
        assert m0.out_neighbors(eid) == sorted(m0.out_neighbors(eid))
        assert m0.in_neighbors(eid) == sorted(m0.in_neighbors(eid))


def test_element_attributes_are_read_only(m0):
    with pytest.raises(TypeError):
        m0.element("VF1").attributes["category"] = "control"

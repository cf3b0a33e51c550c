import pytest
from hypothesis import given
from hypothesis import strategies as st

from kgbench.datasets import core_ontology
from kgbench.ontology import (
    OntologyError,
    RelationOntology,
    canonical_label,
    emit_ontology,
    load_ontology,
)


def test_core_vocabulary_loads():
    ont = core_ontology()
    # 14 file rows: 5 symmetric, 9 asymmetric pairs -> 23 distinct labels
    assert len(ont) == 23
    assert ont.inverse_of("Child of") == "Parent of"
    assert ont.inverse_of("Parent of") == "Child of"
    assert ont.inverse_of("Spouse of") == "Spouse of"
    assert ont.inverse_of("Superintendent at") == "Responsibility of"
    assert ont.inverse_of("Friend of") == "Friend of"


def test_involution_over_core():
    ont = core_ontology()
    for r in ont:
        assert ont.inverse_of(ont.inverse_of(r)) == r


def test_canonicalization():
    assert canonical_label("  Parent   of ") == "Parent of"
    ont = load_ontology("Child  of |  Parent of\n")
    assert ont.inverse_of("Child of") == "Parent of"


def test_case_sensitive():
    ont = load_ontology("Child of | Parent of")
    with pytest.raises(OntologyError, match="unknown relation"):
        ont.inverse_of("child of")


def test_unknown_relation_named_in_error():
    ont = load_ontology("Spouse of | Spouse of")
    with pytest.raises(OntologyError, match="Owns"):
        ont.inverse_of("Owns")


@pytest.mark.parametrize(
    "text,match",
    [
        ("", "empty ontology"),
        ("# only a comment\n\n", "empty ontology"),
        ("Child of | Parent of\nChild of | Parent of\n", "duplicate"),
        ("A of | B of\nB of | C of\n", "non-involutive"),
        ("A of |\n", "empty relation label"),
        ("A of\n", "expected"),
    ],
)
def test_load_errors(text, match):
    with pytest.raises(OntologyError, match=match):
        load_ontology(text)


def test_extend():
    ont = load_ontology("Spouse of | Spouse of")
    ext = ont.extended("Owner of", "Owned by")
    assert "Owner of" in ext and "Owned by" in ext
    assert "Owner of" not in ont  # value semantics
    again = ext.extended("Owner of", "Owned by")
    assert again == ext  # idempotent
    with pytest.raises(OntologyError, match="conflicting"):
        ext.extended("Owner of", "Spouse of")


def test_extend_self_inverse():
    ont = RelationOntology({})
    ext = ont.extended("Neighbor of", "Neighbor of")
    assert len(ext) == 1
    assert ext.inverse_of("Neighbor of") == "Neighbor of"


def test_extend_pair_on_empty():
    ext = RelationOntology({}).extended("Owner of", "Owned by")
    assert len(ext) == 2


@st.composite
def ontology_files(draw):
    n = draw(st.integers(min_value=1, max_value=8))
    lines = []
    for i in range(n):
        if draw(st.booleans()):
            lines.append(f"S{i} of | S{i} of")
        else:
            lines.append(f"F{i} of | R{i} of")
    return "\n".join(lines)


@given(ontology_files())
def test_loaded_ontologies_are_involutions(text):
    ont = load_ontology(text)
    for r in ont:
        assert ont.inverse_of(ont.inverse_of(r)) == r


@given(ontology_files())
def test_emit_load_round_trip(text):
    ont = load_ontology(text)
    assert load_ontology(emit_ontology(ont)) == ont

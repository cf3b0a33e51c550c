"""Bundled demo data: the core relation vocabulary and a small Simpsons
story world used throughout the docs and tests."""

from __future__ import annotations

from importlib import resources

from .formats import has_errors, parse_tgf, parse_xgml
from .graph import KnowledgeGraph
from .ontology import RelationOntology, load_ontology


def _read(name: str) -> str:
    return (resources.files("kgbench") / "data" / name).read_text(encoding="utf-8")


def core_ontology() -> RelationOntology:
    """The bundled default character-relation vocabulary."""
    return load_ontology(_read("core_relations.ont"))


def simpsons_ontology() -> RelationOntology:
    """Core vocabulary plus the annotator-introduced relations the Simpsons
    world uses."""
    return load_ontology(_read("simpsons.ont"))


def simpsons_graph(fmt: str = "tgf") -> KnowledgeGraph:
    if fmt == "tgf":
        graph, diags = parse_tgf(_read("simpsons.tgf"), simpsons_ontology())
    elif fmt == "xgml":
        graph, diags = parse_xgml(_read("simpsons.xgml"), simpsons_ontology())
    else:
        raise ValueError(f"unknown graph format: {fmt!r}")
    assert graph is not None and not has_errors(diags)
    return graph

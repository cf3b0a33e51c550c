"""Relation vocabulary and the inverse-relation mapping.

Every relation has a declared inverse (possibly itself), so a stored
directed edge can be traversed backwards under the inverse label.  The
inverse map is a total involution over the relation set.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Mapping


class OntologyError(ValueError):
    pass


def canonical_label(raw: str) -> str:
    """Trim and collapse internal whitespace; comparison is then exact and
    case-sensitive."""
    return " ".join(raw.split())


@dataclass(frozen=True)
class RelationOntology:
    """Immutable set of relation labels plus their inverse involution."""

    inverse: Mapping[str, str] = field(default_factory=dict)

    def __post_init__(self):
        inv = dict(self.inverse)
        for r, i in inv.items():
            if not r or not i:
                raise OntologyError("empty relation label")
            if inv.get(i) != r:
                raise OntologyError(
                    f"inverse map is not an involution at {r!r} -> {i!r}"
                )
        object.__setattr__(self, "inverse", inv)

    @property
    def relations(self) -> frozenset[str]:
        return frozenset(self.inverse)

    def __contains__(self, relation: str) -> bool:
        return relation in self.inverse

    def __iter__(self) -> Iterator[str]:
        return iter(sorted(self.inverse))

    def __len__(self) -> int:
        return len(self.inverse)

    def inverse_of(self, relation: str) -> str:
        try:
            return self.inverse[relation]
        except KeyError:
            raise OntologyError(f"unknown relation: {relation!r}") from None

    def is_symmetric(self, relation: str) -> bool:
        return self.inverse_of(relation) == relation

    def extended(self, relation: str, inverse: str) -> "RelationOntology":
        """New ontology with the pair added; re-adding an identical pair is a
        no-op, a conflicting redefinition is an error."""
        r = canonical_label(relation)
        i = canonical_label(inverse)
        if not r or not i:
            raise OntologyError("empty relation label")
        merged = dict(self.inverse)
        for label, inv in ((r, i), (i, r)):
            if label in merged and merged[label] != inv:
                raise OntologyError(
                    f"conflicting inverse for {label!r}: "
                    f"{merged[label]!r} vs {inv!r}"
                )
            merged[label] = inv
        return RelationOntology(merged)


def load_ontology(text: str) -> RelationOntology:
    """Parse the ontology file format: one `<relation> | <inverse>` pair per
    line, `#` comment lines, blank lines ignored.  Self-inverse relations
    repeat the label."""
    pairs: dict[str, str] = {}
    declared: set[str] = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "|" not in line:
            raise OntologyError(f"line {lineno}: expected '<relation> | <inverse>'")
        left, _, right = line.partition("|")
        r = canonical_label(left)
        i = canonical_label(right)
        if not r or not i:
            raise OntologyError(f"line {lineno}: empty relation label")
        if r in declared:
            if pairs.get(r) == i:
                raise OntologyError(f"line {lineno}: duplicate relation {r!r}")
            raise OntologyError(
                f"line {lineno}: non-involutive pairing for {r!r}: "
                f"{pairs[r]!r} vs {i!r}"
            )
        declared.add(r)
        if r != i:
            if i in declared:
                if pairs.get(i) == r:
                    raise OntologyError(f"line {lineno}: duplicate relation {i!r}")
                raise OntologyError(
                    f"line {lineno}: non-involutive pairing for {i!r}: "
                    f"{pairs[i]!r} vs {r!r}"
                )
            declared.add(i)
        for label, inv in ((r, i), (i, r)):
            if label in pairs and pairs[label] != inv:
                raise OntologyError(
                    f"line {lineno}: non-involutive pairing for {label!r}: "
                    f"{pairs[label]!r} vs {inv!r}"
                )
            pairs[label] = inv
    if not pairs:
        raise OntologyError("empty ontology file")
    return RelationOntology(pairs)


def emit_ontology(ontology: RelationOntology) -> str:
    """Deterministic inverse of load_ontology: each pair once, sorted by its
    lexicographically smaller member."""
    lines = []
    for r in sorted(ontology.relations):
        i = ontology.inverse_of(r)
        if r <= i:
            lines.append(f"{r} | {i}")
    return "\n".join(lines) + "\n"

"""Brute-force ground-truth solver.

Everything here works on the traversal view of the graph (stored edges plus
their inverse-labeled reversals) and is exhaustive by construction: the
pattern matcher enumerates injective variable bindings, the path enumerator
walks every simple route.  Scorers and generators are tested against these
results.
"""

from __future__ import annotations

from dataclasses import dataclass

from .graph import GraphError, KnowledgeGraph, NodeId

VARIABLE_PREFIX = "Unknown_"


class OracleError(ValueError):
    pass


@dataclass(frozen=True)
class Variable:
    """A pattern hole, e.g. Unknown_1; category restricts the nodes it may
    bind (None = any category)."""

    name: str
    category: str | None = None


@dataclass(frozen=True)
class PatternTriple:
    """subject -[relation]-> object where either end may be a Variable; the
    relation is always concrete."""

    subject: NodeId | Variable
    relation: str
    object: NodeId | Variable


@dataclass(frozen=True)
class Path:
    """Simple route: nodes[0], relations[0], nodes[1], ..., nodes[-1].
    Relations are as traversed (stored or inverse direction)."""

    nodes: tuple[NodeId, ...]
    relations: tuple[str, ...]

    def __post_init__(self):
        if len(self.nodes) != len(self.relations) + 1 or not self.relations:
            raise OracleError("path must alternate n0, r1, n1, ... with k >= 1")

    @property
    def length(self) -> int:
        return len(self.relations)

    @property
    def source(self) -> NodeId:
        return self.nodes[0]

    @property
    def target(self) -> NodeId:
        return self.nodes[-1]

    def sort_key(self):
        return tuple(
            part
            for node, rel in zip(self.nodes, self.relations + ("",))
            for part in (node.canonical, rel)
        )


def is_variable_name(name: str) -> bool:
    return name.startswith(VARIABLE_PREFIX) and name[len(VARIABLE_PREFIX):].isdigit()


def pattern_variables(triples: list[PatternTriple]) -> list[Variable]:
    """Distinct variables in first-appearance order."""
    seen: dict[str, Variable] = {}
    for t in triples:
        for end in (t.subject, t.object):
            if isinstance(end, Variable) and end.name not in seen:
                seen[end.name] = end
    return list(seen.values())


def _check_pattern(graph: KnowledgeGraph, triples: list[PatternTriple]) -> None:
    if not triples:
        raise OracleError("pattern with zero triples")
    for t in triples:
        if t.relation not in graph.ontology:
            raise OracleError(f"unknown relation: {t.relation!r}")
        for end in (t.subject, t.object):
            if isinstance(end, NodeId) and end not in graph.nodes:
                raise OracleError(f"unknown constant: {end}")


def solve_pattern(
    graph: KnowledgeGraph, triples: list[PatternTriple]
) -> set[frozenset[tuple[str, NodeId]]]:
    """All injective bindings (variable name -> node) under which every
    triple is a traversal-view edge.  Bindings are returned as frozensets of
    (name, node) pairs so result sets are directly comparable.

    Backtracking search with per-triple candidate filtering; must agree
    with naive enumeration over all node tuples (see tests).
    """
    _check_pattern(graph, triples)
    variables = pattern_variables(triples)
    constants = {
        end
        for t in triples
        for end in (t.subject, t.object)
        if isinstance(end, NodeId)
    }

    results: set[frozenset[tuple[str, NodeId]]] = set()

    def satisfied(t: PatternTriple, binding: dict[str, NodeId]) -> bool | None:
        """True/False when both ends are resolved, None when still open."""
        s = binding.get(t.subject.name) if isinstance(t.subject, Variable) else t.subject
        o = binding.get(t.object.name) if isinstance(t.object, Variable) else t.object
        if s is None or o is None:
            return None
        if s == o:
            return False
        return graph.has_link(s, t.relation, o)

    def candidates(var: Variable, binding: dict[str, NodeId]) -> list[NodeId]:
        pool: set[NodeId] | None = None
        for t in triples:
            for this_end, other_end, forward in (
                (t.subject, t.object, True),
                (t.object, t.subject, False),
            ):
                if not (isinstance(this_end, Variable) and this_end.name == var.name):
                    continue
                anchor = (
                    binding.get(other_end.name)
                    if isinstance(other_end, Variable)
                    else other_end
                )
                if anchor is None:
                    continue
                # neighbors of the anchor under the triple's relation, read
                # from the correct side
                rel = t.relation if not forward else graph.ontology.inverse_of(t.relation)
                found = {
                    other for other, r in graph.neighbors(anchor) if r == rel
                }
                pool = found if pool is None else pool & found
        if pool is None:
            pool = set(graph.nodes)
        if var.category is not None:
            pool = {n for n in pool if n.category == var.category}
        used = set(binding.values()) | constants
        return sorted(pool - used, key=lambda n: n.canonical)

    def search(idx: int, binding: dict[str, NodeId]) -> None:
        if idx == len(variables):
            if all(satisfied(t, binding) for t in triples):
                results.add(frozenset(binding.items()))
            return
        var = variables[idx]
        for node in candidates(var, binding):
            binding[var.name] = node
            if all(satisfied(t, binding) is not False for t in triples):
                search(idx + 1, binding)
            del binding[var.name]

    search(0, {})
    return results


def enumerate_paths(
    graph: KnowledgeGraph,
    source: NodeId,
    target: NodeId,
    max_edges: int | None = None,
) -> list[Path]:
    """All simple traversal-view paths from source to target, up to
    max_edges when given, by depth-first search with backtracking.
    Deterministic order: sorted by (length, node/relation sequence)."""
    if source == target:
        raise OracleError("source and target must differ")
    for n in (source, target):
        if n not in graph.nodes:
            raise OracleError(f"unknown node: {n}")
    results: list[Path] = []
    visited = {source}
    node_stack = [source]
    rel_stack: list[str] = []

    def dfs(current: NodeId) -> None:
        if max_edges is not None and len(rel_stack) >= max_edges:
            return
        for other, rel in graph.neighbors(current):
            if other == target:
                results.append(
                    Path(tuple(node_stack) + (target,), tuple(rel_stack) + (rel,))
                )
                continue
            if other in visited:
                continue
            visited.add(other)
            node_stack.append(other)
            rel_stack.append(rel)
            dfs(other)
            rel_stack.pop()
            node_stack.pop()
            visited.remove(other)

    dfs(source)
    results.sort(key=lambda p: (p.length, p.sort_key()))
    return results


def answer_choice(
    graph: KnowledgeGraph,
    subject: NodeId,
    object: NodeId,
    options: list[str],
) -> set[int]:
    """Indices of options r for which (subject, r, object) is a
    traversal-view edge."""
    if not options:
        raise OracleError("empty option list")
    for n in (subject, object):
        if n not in graph.nodes:
            raise OracleError(f"unknown node: {n}")
    correct = set()
    for i, rel in enumerate(options):
        if rel in graph.ontology and graph.has_link(subject, rel, object):
            correct.add(i)
    return correct

"""Seeded generation of the three query types with oracle-verified answer
keys.

All randomness flows from a single integer seed through the splitmix64
stream; equal (graph, seed, parameters) produce identical query lists.
Generation rejection-samples and fails loudly ("insufficient structure")
rather than looping forever on degenerate graphs.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .graph import PERSON, KnowledgeGraph, NodeId
from .oracle import (
    Path,
    PatternTriple,
    Variable,
    answer_choice,
    enumerate_paths,
    pattern_variables,
    solve_pattern,
)
from .rng import SplitMix64

ATTEMPT_BUDGET = 1000

Binding = frozenset[tuple[str, NodeId]]


class GenerationError(RuntimeError):
    pass


@dataclass(frozen=True)
class FillQuery:
    id: str
    triples: tuple[PatternTriple, ...]
    key: frozenset[Binding] = field(compare=False)

    @property
    def variables(self) -> list[str]:
        return [v.name for v in pattern_variables(list(self.triples))]


@dataclass(frozen=True)
class ChoiceQuery:
    id: str
    subject: NodeId
    object: NodeId
    options: tuple[str, ...]
    key: int = field(compare=False)  # index into options


@dataclass(frozen=True)
class PathQuery:
    id: str
    source: NodeId
    target: NodeId
    max_edges: int
    key: frozenset[Path] = field(compare=False)


def _insufficient(what: str) -> GenerationError:
    return GenerationError(
        f"insufficient structure: could not generate {what} "
        f"within {ATTEMPT_BUDGET} attempts"
    )


def _sample_connected_edges(
    graph: KnowledgeGraph, rng: SplitMix64, count: int
) -> list[tuple[NodeId, str, NodeId]]:
    """Random connected set of traversal-view edges grown from a seed node.
    Edges are returned in traversal orientation (as walked)."""
    start = rng.choice(graph.sorted_nodes())
    chosen: list[tuple[NodeId, str, NodeId]] = []
    taken: set[tuple[NodeId, str, NodeId]] = set()
    frontier = [start]
    while len(chosen) < count:
        fringe = sorted(
            {
                (node, rel, other)
                for node in frontier
                for other, rel in graph.neighbors(node)
            }
            - taken
        )
        if not fringe:
            break
        a, r, b = rng.choice(fringe)
        chosen.append((a, r, b))
        taken.add((a, r, b))
        taken.add((b, graph.ontology.inverse_of(r), a))
        if b not in frontier:
            frontier.append(b)
    return chosen


def generate_fill(
    graph: KnowledgeGraph,
    seed: int,
    count: int,
    vars_per_query: int = 2,
    triples_per_query: int = 3,
    require_unique: bool = False,
) -> list[FillQuery]:
    """Sample connected subgraphs, replace nodes with variables, keep
    patterns whose oracle key is non-empty (and unique when required)."""
    if not (1 <= vars_per_query <= 3):
        raise ValueError("vars_per_query must be in 1..3")
    if not (1 <= triples_per_query <= 6):
        raise ValueError("triples_per_query must be in 1..6")
    if graph.node_count < 3 or graph.edge_count < 2:
        raise GenerationError("insufficient structure: graph is too small")
    rng = SplitMix64(seed)
    queries: list[FillQuery] = []
    for qnum in range(1, count + 1):
        for _ in range(ATTEMPT_BUDGET):
            edges = _sample_connected_edges(graph, rng, triples_per_query)
            if not edges:
                continue
            nodes_in_order: list[NodeId] = []
            for a, _, b in edges:
                for n in (a, b):
                    if n not in nodes_in_order:
                        nodes_in_order.append(n)
            if len(nodes_in_order) <= vars_per_query:
                continue
            hidden = rng.sample(nodes_in_order, vars_per_query)
            var_for = {
                node: Variable(f"Unknown_{i}", node.category)
                for i, node in enumerate(hidden, start=1)
            }
            triples = tuple(
                PatternTriple(var_for.get(a, a), r, var_for.get(b, b))
                for a, r, b in edges
            )
            key = solve_pattern(graph, list(triples))
            if not key:
                continue
            if require_unique and len(key) != 1:
                continue
            queries.append(FillQuery(f"Q.A.{qnum}", triples, frozenset(key)))
            break
        else:
            raise _insufficient(f"fill query {qnum}")
    return queries


def generate_choice(
    graph: KnowledgeGraph,
    seed: int,
    count: int,
    n_options: int = 5,
) -> list[ChoiceQuery]:
    """Hide the relation of a seeded edge; distractors are ontology
    relations that hold between the pair in neither direction."""
    if n_options < 1:
        raise ValueError("n_options must be >= 1")
    if len(graph.ontology) < n_options:
        raise GenerationError(
            "insufficient structure: ontology smaller than n_options"
        )
    if graph.edge_count == 0:
        raise GenerationError("insufficient structure: graph has no edges")
    rng = SplitMix64(seed)
    all_edges = graph.sorted_edges()
    all_relations = sorted(graph.ontology.relations)
    queries: list[ChoiceQuery] = []
    for qnum in range(1, count + 1):
        for _ in range(ATTEMPT_BUDGET):
            edge = rng.choice(all_edges)
            nonholding = [
                r
                for r in all_relations
                if not graph.has_link(edge.src, r, edge.dst)
                and not graph.has_link(edge.dst, r, edge.src)
            ]
            if len(nonholding) < n_options - 1:
                continue
            options = [edge.relation] + rng.sample(nonholding, n_options - 1)
            rng.shuffle(options)
            correct = options.index(edge.relation)
            query = ChoiceQuery(
                f"Q.B.{qnum}", edge.src, edge.dst, tuple(options), correct
            )
            assert answer_choice(graph, edge.src, edge.dst, options) == {correct}
            queries.append(query)
            break
        else:
            raise _insufficient(f"choice query {qnum}")
    return queries


def generate_path(
    graph: KnowledgeGraph,
    seed: int,
    count: int,
    max_edges: int = 8,
) -> list[PathQuery]:
    """Sample connected Person pairs; the key is the exhaustive simple-path
    set up to max_edges."""
    rng = SplitMix64(seed)
    persons = [n for n in graph.sorted_nodes() if n.category == PERSON]
    if len(persons) < 2:
        raise GenerationError("insufficient structure: fewer than two Person nodes")
    queries: list[PathQuery] = []
    for qnum in range(1, count + 1):
        for _ in range(ATTEMPT_BUDGET):
            pair = rng.sample(persons, 2)
            source, target = pair
            key = enumerate_paths(graph, source, target, max_edges)
            if not key:
                continue
            queries.append(
                PathQuery(f"Q.C.{qnum}", source, target, max_edges, frozenset(key))
            )
            break
        else:
            raise _insufficient(f"path query {qnum}")
    return queries

"""Command-line surface: validate-graph, gen-queries, answer, score, stats.

Exit codes: 0 success, 1 content error (parse failures, insufficient
structure), 2 I/O or usage error.  All randomness flows from --seed.
"""

from __future__ import annotations

import argparse
import sys
from collections import Counter
from pathlib import Path as FsPath

from . import formats, protocol, scoring
from .graph import KnowledgeGraph, NodeId
from .ontology import OntologyError, load_ontology
from .oracle import answer_choice, enumerate_paths, solve_pattern
from .querygen import (
    ChoiceQuery,
    FillQuery,
    GenerationError,
    PathQuery,
    generate_choice,
    generate_fill,
    generate_path,
)

EXIT_OK = 0
EXIT_CONTENT = 1
EXIT_IO = 2


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


def _read_file(path: str) -> str:
    try:
        return FsPath(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc}", EXIT_IO) from None


def _write_file(path: FsPath, text: str) -> None:
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding="utf-8")
    except OSError as exc:
        raise CliError(f"cannot write {path}: {exc}", EXIT_IO) from None


def _load_graph(args) -> KnowledgeGraph:
    try:
        ontology = load_ontology(_read_file(args.ontology))
    except OntologyError as exc:
        raise CliError(f"ontology: {exc}", EXIT_CONTENT) from None
    text = _read_file(args.graph)
    graph, diagnostics = formats.parse_graph(
        text, ontology, args.format, getattr(args, "allow_new_relations", False)
    )
    for d in diagnostics:
        print(f"{args.graph}: {d}", file=sys.stderr)
    if graph is None:
        raise CliError(f"graph {args.graph} failed to parse", EXIT_CONTENT)
    return graph


def cmd_validate_graph(args) -> int:
    _load_graph(args)
    print(f"{args.graph}: OK")
    return EXIT_OK


def _generation_params(args) -> dict[str, str]:
    return {
        "seed": str(args.seed),
        "count_a": str(args.count_a),
        "count_b": str(args.count_b),
        "count_c": str(args.count_c),
        "n_options": str(args.n_options),
        "max_edges": str(args.max_edges),
        "require_unique": str(args.require_unique).lower(),
    }


def _self_check(graph: KnowledgeGraph, queries) -> None:
    """Re-verify every answer key against the oracle before writing."""
    for q in queries:
        if isinstance(q, FillQuery):
            assert solve_pattern(graph, list(q.triples)) == set(q.key)
        elif isinstance(q, ChoiceQuery):
            assert answer_choice(graph, q.subject, q.object, list(q.options)) == {q.key}
        else:
            assert frozenset(enumerate_paths(graph, q.source, q.target, q.max_edges)) == q.key


def cmd_gen_queries(args) -> int:
    graph = _load_graph(args)
    out = FsPath(args.out)
    params = _generation_params(args)
    try:
        fill = generate_fill(
            graph,
            args.seed,
            args.count_a,
            require_unique=args.require_unique,
        )
        choice = generate_choice(graph, args.seed + 1, args.count_b, args.n_options)
        paths = generate_path(graph, args.seed + 2, args.count_c, args.max_edges)
    except GenerationError as exc:
        raise CliError(str(exc), EXIT_CONTENT) from None
    for queries in (fill, choice, paths):
        _self_check(graph, queries)
    print("self-check passed: all keys re-verified against the oracle")
    for name, queries in (("a", fill), ("b", choice), ("c", paths)):
        _write_file(out / f"queries_{name}.xml", protocol.emit_query_xml(queries))
        _write_file(out / f"keys_{name}.xml", protocol.emit_key_xml(queries, params))
    print(f"wrote 3 query files and 3 key files to {out}")
    return EXIT_OK


def cmd_answer(args) -> int:
    graph = _load_graph(args)
    try:
        queries = protocol.parse_query_xml(_read_file(args.queries))
    except (protocol.ProtocolError, ValueError) as exc:
        raise CliError(f"queries: {exc}", EXIT_CONTENT) from None
    out = FsPath(args.out)
    try:
        if all(isinstance(q, FillQuery) for q in queries):
            sub = protocol.SubmissionA(args.team)
            for q in queries:
                bindings = solve_pattern(graph, list(q.triples))
                per_var: dict[str, list] = {v: [] for v in q.variables}
                for binding in sorted(
                    bindings, key=lambda b: sorted((n, v.canonical) for n, v in b)
                ):
                    for name, node in sorted(binding):
                        if node not in [n for n, _ in per_var[name]]:
                            per_var[name].append((node, 1.0))
                sub.answers[q.id] = per_var
            text = protocol.emit_submission_a(sub)
        elif all(isinstance(q, ChoiceQuery) for q in queries):
            sub = protocol.SubmissionB(args.team)
            for q in queries:
                correct = answer_choice(graph, q.subject, q.object, list(q.options))
                if len(correct) != 1:
                    raise CliError(
                        f"{q.id}: expected exactly one correct option, "
                        f"got {len(correct)} (query/graph mismatch?)",
                        EXIT_CONTENT,
                    )
                sub.answers[q.id] = q.options[correct.pop()]
            text = protocol.emit_submission_b(sub)
        else:
            sub = protocol.SubmissionC(args.team)
            for q in queries:
                sub.answers[q.id] = enumerate_paths(
                    graph, q.source, q.target, q.max_edges
                )
            text = protocol.emit_submission_c(sub)
    except ValueError as exc:
        raise CliError(f"query/graph mismatch: {exc}", EXIT_CONTENT) from None
    _write_file(out, text)
    print(f"wrote submission to {out}")
    return EXIT_OK


def cmd_score(args) -> int:
    graph = _load_graph(args)
    key_queries = []
    params: dict[str, str] = {}
    for key_path in args.keys:
        try:
            queries, key_params = protocol.parse_key_xml(_read_file(key_path))
        except (protocol.ProtocolError, ValueError) as exc:
            raise CliError(f"{key_path}: {exc}", EXIT_CONTENT) from None
        key_queries.extend(queries)
        params.update(key_params)

    fill_queries = [q for q in key_queries if isinstance(q, FillQuery)]
    choice_queries = [q for q in key_queries if isinstance(q, ChoiceQuery)]
    path_queries = [q for q in key_queries if isinstance(q, PathQuery)]

    fill_scores: list[scoring.FillScore] = []
    choice_score = None
    path_scores: list[scoring.PathScore] = []
    team = "unknown"
    empty_a = protocol.SubmissionA(team)
    scored_a: set[str] = set()
    scored_c: set[str] = set()

    for sub_path in args.submissions:
        try:
            sub, diagnostics = protocol.parse_submission_xml(
                _read_file(sub_path), key_queries
            )
        except (protocol.ProtocolError, ValueError) as exc:
            raise CliError(f"{sub_path}: {exc}", EXIT_CONTENT) from None
        for d in diagnostics:
            print(f"{sub_path}: {d}", file=sys.stderr)
        team = sub.team or team
        if isinstance(sub, protocol.SubmissionA):
            fill_scores.extend(scoring.score_fill(q, sub) for q in fill_queries)
            scored_a.update(q.id for q in fill_queries)
        elif isinstance(sub, protocol.SubmissionB):
            choice_score = scoring.score_choice(choice_queries, sub)
        else:
            path_scores.extend(
                scoring.score_paths(graph, q, sub.answers.get(q.id, []))
                for q in path_queries
            )
            scored_c.update(q.id for q in path_queries)

    # queries with no submission file at all are scored as empty
    fill_scores.extend(
        scoring.score_fill(q, empty_a) for q in fill_queries if q.id not in scored_a
    )
    if choice_score is None and choice_queries:
        choice_score = scoring.score_choice(
            choice_queries, protocol.SubmissionB(team)
        )
    path_scores.extend(
        scoring.score_paths(graph, q, [])
        for q in path_queries
        if q.id not in scored_c
    )

    report = scoring.aggregate(team, params, fill_scores, choice_score, path_scores)
    out = FsPath(args.out)
    _write_file(out / "report.json", report.to_json())
    _write_file(out / "report.txt", report.to_text())
    recall, precision, f1 = report.path_macro
    print(f"Type A MRR (mean of query MRRs): {report.fill_mrr_mean:.6f}")
    if report.choice is not None:
        print(f"Type B accuracy: {report.choice.accuracy:.6f}")
    print(f"Type C macro recall/precision/F1: {recall:.6f}/{precision:.6f}/{f1:.6f}")
    print(f"wrote report to {out}")
    return EXIT_OK


def cmd_stats(args) -> int:
    graph = _load_graph(args)
    by_category = Counter(n.category for n in graph.nodes)
    by_relation = Counter(e.relation for e in graph.edges)
    print(f"nodes: {graph.node_count}")
    for category in sorted(by_category):
        print(f"  {category}: {by_category[category]}")
    print(f"edges: {graph.edge_count}")
    for relation in sorted(by_relation):
        print(f"  {relation}: {by_relation[relation]}")
    components = _component_count(graph)
    print(f"connected components (traversal view): {components}")
    return EXIT_OK


def _component_count(graph: KnowledgeGraph) -> int:
    seen: set[NodeId] = set()
    components = 0
    for node in graph.sorted_nodes():
        if node in seen:
            continue
        components += 1
        stack = [node]
        seen.add(node)
        while stack:
            current = stack.pop()
            for other, _ in graph.neighbors(current):
                if other not in seen:
                    seen.add(other)
                    stack.append(other)
    return components


def _add_graph_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--graph", required=True, help="graph file path")
    parser.add_argument(
        "--format", choices=("tgf", "xgml"), default="tgf", help="graph file format"
    )
    parser.add_argument("--ontology", required=True, help="ontology file path")
    parser.add_argument(
        "--allow-new-relations",
        action="store_true",
        help="accept relations missing from the ontology as self-inverse",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="kgbench",
        description="Knowledge-graph benchmark toolkit: generate queries, "
        "answer them with the oracle, and score submissions.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate-graph", help="parse a graph file and report diagnostics")
    _add_graph_args(p)
    p.set_defaults(func=cmd_validate_graph)

    p = sub.add_parser("gen-queries", help="generate query and sealed key files")
    _add_graph_args(p)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--count-a", type=int, default=5)
    p.add_argument("--count-b", type=int, default=5)
    p.add_argument("--count-c", type=int, default=2)
    p.add_argument("--n-options", type=int, default=5)
    p.add_argument("--max-edges", type=int, default=8)
    p.add_argument("--require-unique", action="store_true")
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(func=cmd_gen_queries)

    p = sub.add_parser("answer", help="produce the oracle's perfect submission")
    _add_graph_args(p)
    p.add_argument("--queries", required=True, help="query XML file")
    p.add_argument("--team", default="oracle")
    p.add_argument("--out", required=True, help="submission output file")
    p.set_defaults(func=cmd_answer)

    p = sub.add_parser("score", help="score submissions against sealed keys")
    _add_graph_args(p)
    p.add_argument("--keys", nargs="+", required=True, help="key XML files")
    p.add_argument("--submissions", nargs="+", required=True, help="submission XML files")
    p.add_argument("--out", required=True, help="report output directory")
    p.set_defaults(func=cmd_score)

    p = sub.add_parser("stats", help="graph summary statistics")
    _add_graph_args(p)
    p.set_defaults(func=cmd_stats)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_IO if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())

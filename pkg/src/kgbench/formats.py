"""Readers and writers for the two graph interchange formats: TGF (line
oriented) and XGML (GML-style bracketed key/value blocks).

Both parsers are total: they never raise on arbitrary input text but return
``(graph-or-None, diagnostics)``.  Error diagnostics mean no graph is
returned; warnings accompany a returned graph.  Both emitters are
deterministic and round-trip exactly through their parser.
"""

from __future__ import annotations

from dataclasses import dataclass

from .graph import Edge, GraphError, KnowledgeGraph, NodeId
from .ontology import RelationOntology, canonical_label

WARNING = "warning"
ERROR = "error"


@dataclass(frozen=True)
class ParseDiagnostic:
    severity: str
    line: int
    message: str

    def __str__(self) -> str:
        return f"{self.severity}: line {self.line}: {self.message}"


def has_errors(diagnostics: list[ParseDiagnostic]) -> bool:
    return any(d.severity == ERROR for d in diagnostics)


class _GraphAssembler:
    """Shared semantic layer: numeric file-local ids -> canonical NodeIds,
    duplicate-direction tolerance, unknown-relation policy."""

    def __init__(self, ontology: RelationOntology, allow_new_relations: bool):
        self.ontology = ontology
        self.allow_new_relations = allow_new_relations
        self.nodes_by_fileid: dict[int, NodeId] = {}
        self.edges: list[Edge] = []
        self.diagnostics: list[ParseDiagnostic] = []

    def error(self, line: int, message: str) -> None:
        self.diagnostics.append(ParseDiagnostic(ERROR, line, message))

    def warn(self, line: int, message: str) -> None:
        self.diagnostics.append(ParseDiagnostic(WARNING, line, message))

    def add_node(self, line: int, file_id: int, label: str) -> None:
        if file_id in self.nodes_by_fileid:
            self.error(line, f"duplicate node id {file_id}")
            return
        try:
            node = NodeId.parse(label)
        except GraphError as exc:
            self.error(line, str(exc))
            return
        if node in self.nodes_by_fileid.values():
            self.warn(line, f"node {node} declared more than once; merged")
        self.nodes_by_fileid[file_id] = node

    def add_edge(self, line: int, src_id: int, dst_id: int, relation: str) -> None:
        relation = canonical_label(relation)
        if src_id not in self.nodes_by_fileid:
            self.error(line, f"edge references undeclared node id {src_id}")
            return
        if dst_id not in self.nodes_by_fileid:
            self.error(line, f"edge references undeclared node id {dst_id}")
            return
        if relation not in self.ontology:
            if self.allow_new_relations:
                self.ontology = self.ontology.extended(relation, relation)
                self.warn(
                    line,
                    f"relation {relation!r} not in ontology; "
                    "assumed self-inverse",
                )
            else:
                self.error(line, f"relation {relation!r} not in ontology")
                return
        self.edges.append(
            Edge(self.nodes_by_fileid[src_id], relation, self.nodes_by_fileid[dst_id])
        )

    def build(self) -> KnowledgeGraph | None:
        if has_errors(self.diagnostics):
            return None
        graph = KnowledgeGraph(self.ontology)
        for node in self.nodes_by_fileid.values():
            graph = graph.add_node(node)
        for i, edge in enumerate(self.edges, start=1):
            try:
                graph = graph.add_edge(edge.src, edge.relation, edge.dst)
            except GraphError as exc:
                if "duplicate" in str(exc):
                    self.warn(0, f"dropped duplicate edge: {exc}")
                else:
                    self.error(0, str(exc))
        if has_errors(self.diagnostics):
            return None
        return graph


# --- TGF ---------------------------------------------------------------


def parse_tgf(
    text: str,
    ontology: RelationOntology,
    allow_new_relations: bool = False,
) -> tuple[KnowledgeGraph | None, list[ParseDiagnostic]]:
    """TGF: `<int> <label>` node lines, one `#` separator line, then
    `<int> <int> <relation>` edge lines.  Labels may contain spaces."""
    asm = _GraphAssembler(ontology, allow_new_relations)
    seen_separator = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line == "#":
            if seen_separator:
                asm.error(lineno, "multiple '#' separator lines")
            seen_separator = True
            continue
        parts = line.split(None, 1)
        if not seen_separator:
            if len(parts) != 2 or not parts[0].isdigit():
                asm.error(lineno, f"malformed node line: {line!r}")
                continue
            asm.add_node(lineno, int(parts[0]), parts[1])
        else:
            parts = line.split(None, 2)
            if len(parts) != 3 or not parts[0].isdigit() or not parts[1].isdigit():
                asm.error(lineno, f"malformed edge line: {line!r}")
                continue
            asm.add_edge(lineno, int(parts[0]), int(parts[1]), parts[2])
    if not seen_separator:
        asm.error(0, "missing '#' separator line")
    return asm.build(), asm.diagnostics


def emit_tgf(graph: KnowledgeGraph) -> str:
    """Nodes numbered 1..n in sorted canonical order; edges sorted
    lexicographically; trailing newline."""
    nodes = graph.sorted_nodes()
    ids = {node: i for i, node in enumerate(nodes, start=1)}
    lines = [f"{ids[node]} {node.canonical}" for node in nodes]
    lines.append("#")
    for e in graph.sorted_edges():
        lines.append(f"{ids[e.src]} {ids[e.dst]} {e.relation}")
    return "\n".join(lines) + "\n"


# --- XGML --------------------------------------------------------------


_LBRACKET = object()
_RBRACKET = object()


def _tokenize_xgml(text: str) -> tuple[list[tuple[int, object]], list[ParseDiagnostic]]:
    """Tokens are (line, value): value is '['/']' sentinels, str keys, int,
    float, or quoted strings (returned as ('str', content))."""
    tokens: list[tuple[int, object]] = []
    diagnostics: list[ParseDiagnostic] = []
    line = 1
    i = 0
    n = len(text)
    while i < n:
        c = text[i]
        if c == "\n":
            line += 1
            i += 1
        elif c.isspace():
            i += 1
        elif c == "#":
            while i < n and text[i] != "\n":
                i += 1
        elif c == "[":
            tokens.append((line, _LBRACKET))
            i += 1
        elif c == "]":
            tokens.append((line, _RBRACKET))
            i += 1
        elif c == '"':
            i += 1
            buf = []
            closed = False
            while i < n:
                c = text[i]
                if c == "\\" and i + 1 < n and text[i + 1] in '"\\':
                    buf.append(text[i + 1])
                    i += 2
                elif c == '"':
                    closed = True
                    i += 1
                    break
                else:
                    if c == "\n":
                        line += 1
                    buf.append(c)
                    i += 1
            if not closed:
                diagnostics.append(
                    ParseDiagnostic(ERROR, line, "unterminated quoted string")
                )
            tokens.append((line, ("str", "".join(buf))))
        else:
            j = i
            while j < n and not text[j].isspace() and text[j] not in '[]"#':
                j += 1
            word = text[i:j]
            i = j
            try:
                tokens.append((line, int(word)))
            except ValueError:
                try:
                    tokens.append((line, float(word)))
                except ValueError:
                    tokens.append((line, word))
    return tokens, diagnostics


def _parse_xgml_block(tokens, pos, diagnostics):
    """Parse a `key value` list until ']' or end; returns (entries, pos).
    Entries are (line, key, value) where value may be a nested list."""
    entries = []
    n = len(tokens)
    while pos < n:
        line, tok = tokens[pos]
        if tok is _RBRACKET:
            return entries, pos + 1, True
        if not isinstance(tok, str):
            diagnostics.append(
                ParseDiagnostic(ERROR, line, f"expected a key, got {tok!r}")
            )
            pos += 1
            continue
        key = tok
        pos += 1
        if pos >= n:
            diagnostics.append(
                ParseDiagnostic(ERROR, line, f"key {key!r} without a value")
            )
            break
        vline, vtok = tokens[pos]
        if vtok is _LBRACKET:
            sub, pos, closed = _parse_xgml_block(tokens, pos + 1, diagnostics)
            if not closed:
                diagnostics.append(
                    ParseDiagnostic(ERROR, vline, "unbalanced brackets")
                )
            entries.append((line, key, sub))
        elif vtok is _RBRACKET:
            diagnostics.append(
                ParseDiagnostic(ERROR, vline, f"key {key!r} without a value")
            )
            pos += 1
        else:
            if isinstance(vtok, tuple):
                vtok = vtok[1]
            entries.append((line, key, vtok))
            pos += 1
    return entries, pos, False


def parse_xgml(
    text: str,
    ontology: RelationOntology,
    allow_new_relations: bool = False,
) -> tuple[KnowledgeGraph | None, list[ParseDiagnostic]]:
    """Minimal XGML subset: a `graph [...]` block containing `node [ id,
    label ]` and `edge [ source, target, label ]` blocks.  Other keys are
    ignored with a warning."""
    tokens, diagnostics = _tokenize_xgml(text)
    asm = _GraphAssembler(ontology, allow_new_relations)
    asm.diagnostics.extend(diagnostics)
    top, pos, closed = _parse_xgml_block(tokens, 0, asm.diagnostics)
    if closed or pos < len(tokens):
        asm.error(0, "unbalanced brackets at top level")
    graph_blocks = [(ln, v) for ln, k, v in top if k == "graph"]
    for ln, k, _ in top:
        if k != "graph":
            asm.warn(ln, f"ignored top-level key {k!r}")
    if len(graph_blocks) != 1 or not isinstance(graph_blocks[0][1], list):
        asm.error(0, "expected exactly one graph [...] block")
        return None, asm.diagnostics
    _, body = graph_blocks[0]

    def scalar(entries, key, kind, line, where):
        values = [v for _, k, v in entries if k == key]
        if len(values) != 1 or not isinstance(values[0], kind):
            asm.error(line, f"{where} needs exactly one {key}")
            return None
        return values[0]

    for line, key, value in body:
        if key == "node":
            if not isinstance(value, list):
                asm.error(line, "node must be a [...] block")
                continue
            node_id = scalar(value, "id", int, line, "node")
            label = scalar(value, "label", str, line, "node")
            for eline, ekey, _ in value:
                if ekey not in ("id", "label"):
                    asm.warn(eline, f"ignored node key {ekey!r}")
            if node_id is not None and label is not None:
                asm.add_node(line, node_id, label)
        elif key == "edge":
            if not isinstance(value, list):
                asm.error(line, "edge must be a [...] block")
                continue
            src = scalar(value, "source", int, line, "edge")
            dst = scalar(value, "target", int, line, "edge")
            label = scalar(value, "label", str, line, "edge")
            for eline, ekey, _ in value:
                if ekey not in ("source", "target", "label"):
                    asm.warn(eline, f"ignored edge key {ekey!r}")
            if src is not None and dst is not None and label is not None:
                asm.add_edge(line, src, dst, label)
        elif key == "directed":
            continue
        else:
            asm.warn(line, f"ignored graph key {key!r}")
    return asm.build(), asm.diagnostics


def _quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def emit_xgml(graph: KnowledgeGraph) -> str:
    """Same ordering contract as emit_tgf; node ids start at 0 as graph
    editors emit them."""
    nodes = graph.sorted_nodes()
    ids = {node: i for i, node in enumerate(nodes)}
    lines = ["graph [", "\tdirected 1"]
    for node in nodes:
        lines += [
            "\tnode [",
            f"\t\tid {ids[node]}",
            f"\t\tlabel {_quote(node.canonical)}",
            "\t]",
        ]
    for e in graph.sorted_edges():
        lines += [
            "\tedge [",
            f"\t\tsource {ids[e.src]}",
            f"\t\ttarget {ids[e.dst]}",
            f"\t\tlabel {_quote(e.relation)}",
            "\t]",
        ]
    lines.append("]")
    return "\n".join(lines) + "\n"


def parse_graph(
    text: str,
    ontology: RelationOntology,
    fmt: str,
    allow_new_relations: bool = False,
) -> tuple[KnowledgeGraph | None, list[ParseDiagnostic]]:
    if fmt == "tgf":
        return parse_tgf(text, ontology, allow_new_relations)
    if fmt == "xgml":
        return parse_xgml(text, ontology, allow_new_relations)
    raise ValueError(f"unknown graph format: {fmt!r}")

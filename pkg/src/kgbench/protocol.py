"""XML wire formats: query files, sealed answer-key files, and participant
submissions.

Element vocabulary
------------------
Query files (one document per type):
    <QA><Query id="Q.A.1"><Triple><Subject>Person:Unknown_1</Subject>
        <Pred>Relation:Spouse_of</Pred><Object>Person:Marge</Object>
        </Triple>...</Query>...</QA>
    <QB><Query id="Q.B.1"><Subject>...</Subject><Pred>Relation:Unknown_1</Pred>
        <Object>...</Object><Option index="1">Relation:X</Option>...</Query></QB>
    <QC><Query id="Q.C.1" max_edges="8"><Source>...</Source>
        <Target>...</Target></Query></QC>

Submission files (root carries a required team attribute):
    <QA team="t"><Query id="..."><Answer var="Unknown_1" rank="1"
        confidence="0.9">Person:Homer</Answer>...</Query></QA>
    <QB team="t"><Query id="..."><Answer>Relation:Teacher_at</Answer></Query></QB>
    <QC team="t"><Query id="..."><Path index="1"><Source>...</Source>
        <Edge>Relation:...</Edge><Node>...</Node>...<Target>...</Target>
        </Path>...</Query></QC>

Key files use roots QAKey/QBKey/QCKey and are never embedded in query files.

Relation labels encode spaces as underscores inside "Relation:..." text;
node names keep literal spaces.  Variables are recognized by the
"Unknown_<n>" name pattern after the category prefix.
"""

from __future__ import annotations

import math
import xml.etree.ElementTree as ET
from dataclasses import dataclass, field

from .graph import GraphError, NodeId
from .oracle import OracleError, Path, PatternTriple, Variable, is_variable_name
from .querygen import ChoiceQuery, FillQuery, PathQuery

Query = FillQuery | ChoiceQuery | PathQuery


class ProtocolError(ValueError):
    pass


@dataclass(frozen=True)
class Diagnostic:
    severity: str  # "warning" | "error"
    where: str  # query id or element path
    message: str

    def __str__(self) -> str:
        return f"{self.severity}: {self.where}: {self.message}"


@dataclass
class SubmissionA:
    """Per query, per variable: ranked (node, confidence) answers."""

    team: str
    answers: dict[str, dict[str, list[tuple[NodeId, float]]]] = field(
        default_factory=dict
    )


@dataclass
class SubmissionB:
    team: str
    answers: dict[str, str] = field(default_factory=dict)  # query id -> relation


@dataclass
class SubmissionC:
    team: str
    answers: dict[str, list[Path]] = field(default_factory=dict)


# --- text encodings ------------------------------------------------------


def encode_relation(relation: str) -> str:
    return "Relation:" + relation.replace(" ", "_")


def decode_relation(text: str) -> str:
    prefix, sep, rest = text.strip().partition(":")
    if not sep or prefix.strip() != "Relation":
        raise ProtocolError(f"expected 'Relation:...' text, got {text!r}")
    return rest.strip().replace("_", " ")


def encode_node_ref(ref: NodeId | Variable) -> str:
    if isinstance(ref, Variable):
        return f"{ref.category or 'Any'}:{ref.name}"
    return ref.canonical


def decode_node_ref(text: str) -> NodeId | Variable:
    node = NodeId.parse(text)
    if is_variable_name(node.name):
        category = None if node.category == "Any" else node.category
        return Variable(node.name, category)
    return node


def decode_node(text: str) -> NodeId:
    ref = decode_node_ref(text)
    if isinstance(ref, Variable):
        raise ProtocolError(f"variable where a concrete node was expected: {text!r}")
    return ref


# --- emit helpers ---------------------------------------------------------


def _document(root: ET.Element, header_comment: str | None = None) -> str:
    ET.indent(root)
    body = ET.tostring(root, encoding="unicode")
    header = '<?xml version="1.0" encoding="UTF-8"?>\n'
    if header_comment:
        header += f"<!-- {header_comment} -->\n"
    return header + body + "\n"


def _path_element(path: Path, index: int) -> ET.Element:
    el = ET.Element("Path", {"index": str(index)})
    ET.SubElement(el, "Source").text = path.source.canonical
    for rel, node in zip(path.relations[:-1], path.nodes[1:-1]):
        ET.SubElement(el, "Edge").text = encode_relation(rel)
        ET.SubElement(el, "Node").text = node.canonical
    ET.SubElement(el, "Edge").text = encode_relation(path.relations[-1])
    ET.SubElement(el, "Target").text = path.target.canonical
    return el


def _parse_path_element(el: ET.Element) -> Path:
    children = list(el)
    if len(children) < 3 or len(children) % 2 == 0:
        raise ProtocolError("path must alternate Source/Edge/Node/.../Target")
    expected = ["Source"]
    for _ in range((len(children) - 3) // 2):
        expected += ["Edge", "Node"]
    expected += ["Edge", "Target"]
    tags = [c.tag for c in children]
    if tags != expected:
        raise ProtocolError(
            f"path elements out of order: got {tags}, expected {expected}"
        )
    nodes = [decode_node(c.text or "") for c in children if c.tag != "Edge"]
    relations = [decode_relation(c.text or "") for c in children if c.tag == "Edge"]
    return Path(tuple(nodes), tuple(relations))


# --- query files -----------------------------------------------------------


_ROOT_FOR_TYPE = {FillQuery: "QA", ChoiceQuery: "QB", PathQuery: "QC"}


def emit_query_xml(queries: list[Query]) -> str:
    """One document per type; mixing types in one call is rejected.  Answer
    keys are never serialized here."""
    kinds = {type(q) for q in queries}
    if len(kinds) > 1:
        raise ProtocolError("query files hold a single query type")
    root_tag = _ROOT_FOR_TYPE[kinds.pop()] if kinds else "QA"
    root = ET.Element(root_tag)
    for q in queries:
        if isinstance(q, FillQuery):
            qel = ET.SubElement(root, "Query", {"id": q.id})
            for t in q.triples:
                tel = ET.SubElement(qel, "Triple")
                ET.SubElement(tel, "Subject").text = encode_node_ref(t.subject)
                ET.SubElement(tel, "Pred").text = encode_relation(t.relation)
                ET.SubElement(tel, "Object").text = encode_node_ref(t.object)
        elif isinstance(q, ChoiceQuery):
            qel = ET.SubElement(root, "Query", {"id": q.id})
            ET.SubElement(qel, "Subject").text = q.subject.canonical
            ET.SubElement(qel, "Pred").text = "Relation:Unknown_1"
            ET.SubElement(qel, "Object").text = q.object.canonical
            for i, option in enumerate(q.options, start=1):
                oel = ET.SubElement(qel, "Option", {"index": str(i)})
                oel.text = encode_relation(option)
        else:
            qel = ET.SubElement(root, "Query", {"id": q.id, "max_edges": str(q.max_edges)})
            ET.SubElement(qel, "Source").text = q.source.canonical
            ET.SubElement(qel, "Target").text = q.target.canonical
    return _document(root)


def _require(condition: bool, message: str) -> None:
    if not condition:
        raise ProtocolError(message)


def _load_root(text: str, allowed_tags: tuple[str, ...]) -> ET.Element:
    try:
        root = ET.fromstring(text)
    except ET.ParseError as exc:
        raise ProtocolError(f"malformed XML: {exc}") from None
    _require(
        root.tag in allowed_tags,
        f"unexpected root element {root.tag!r}, expected one of {allowed_tags}",
    )
    return root


def parse_query_xml(text: str) -> list[Query]:
    """Keyless structural queries for participant-side tooling.  Parsed
    FillQuery/ChoiceQuery/PathQuery carry empty/zero keys."""
    root = _load_root(text, ("QA", "QB", "QC"))
    queries: list[Query] = []
    seen_ids: set[str] = set()
    for qel in root:
        _require(qel.tag == "Query", f"unknown element {qel.tag!r}")
        qid = qel.get("id")
        _require(bool(qid), "Query without an id attribute")
        _require(qid not in seen_ids, f"duplicate query id {qid!r}")
        seen_ids.add(qid)
        if root.tag == "QA":
            triples = []
            for tel in qel:
                _require(tel.tag == "Triple", f"unknown element {tel.tag!r} in {qid}")
                parts = {c.tag: (c.text or "") for c in tel}
                _require(
                    set(parts) == {"Subject", "Pred", "Object"},
                    f"{qid}: Triple needs Subject/Pred/Object",
                )
                triples.append(
                    PatternTriple(
                        decode_node_ref(parts["Subject"]),
                        decode_relation(parts["Pred"]),
                        decode_node_ref(parts["Object"]),
                    )
                )
            _require(bool(triples), f"{qid}: fill query without triples")
            queries.append(FillQuery(qid, tuple(triples), frozenset()))
        elif root.tag == "QB":
            parts: dict[str, str] = {}
            options: list[tuple[int, str]] = []
            for cel in qel:
                if cel.tag == "Option":
                    idx = cel.get("index")
                    _require(
                        idx is not None and idx.isdigit(),
                        f"{qid}: Option without a numeric index",
                    )
                    options.append((int(idx), decode_relation(cel.text or "")))
                elif cel.tag in ("Subject", "Pred", "Object"):
                    parts[cel.tag] = cel.text or ""
                else:
                    raise ProtocolError(f"unknown element {cel.tag!r} in {qid}")
            _require(
                set(parts) == {"Subject", "Pred", "Object"},
                f"{qid}: choice query needs Subject/Pred/Object",
            )
            _require(bool(options), f"{qid}: choice query without options")
            options.sort()
            _require(
                [i for i, _ in options] == list(range(1, len(options) + 1)),
                f"{qid}: option indices must be 1..n",
            )
            queries.append(
                ChoiceQuery(
                    qid,
                    decode_node(parts["Subject"]),
                    decode_node(parts["Object"]),
                    tuple(label for _, label in options),
                    -1,
                )
            )
        else:
            parts = {c.tag: (c.text or "") for c in qel}
            _require(
                set(parts) == {"Source", "Target"},
                f"{qid}: path query needs Source and Target",
            )
            max_edges = qel.get("max_edges", "8")
            _require(max_edges.isdigit(), f"{qid}: bad max_edges")
            queries.append(
                PathQuery(
                    qid,
                    decode_node(parts["Source"]),
                    decode_node(parts["Target"]),
                    int(max_edges),
                    frozenset(),
                )
            )
    return queries


# --- answer-key files -------------------------------------------------------

CONFIDENTIAL_COMMENT = "CONFIDENTIAL answer key - do not distribute to participants"


def emit_key_xml(queries: list[Query], params: dict[str, str] | None = None) -> str:
    """Sealed answer keys.  Key files are self-contained: they restate the
    query structure alongside the key material, so scoring needs only the
    key file and the submission."""
    kinds = {type(q) for q in queries}
    if len(kinds) > 1:
        raise ProtocolError("key files hold a single query type")
    root_tag = (_ROOT_FOR_TYPE[kinds.pop()] if kinds else "QA") + "Key"
    root = ET.Element(root_tag, dict(sorted((params or {}).items())))
    for q in queries:
        qel = ET.SubElement(root, "Query", {"id": q.id})
        if isinstance(q, FillQuery):
            for t in q.triples:
                tel = ET.SubElement(qel, "Triple")
                ET.SubElement(tel, "Subject").text = encode_node_ref(t.subject)
                ET.SubElement(tel, "Pred").text = encode_relation(t.relation)
                ET.SubElement(tel, "Object").text = encode_node_ref(t.object)
            for i, binding in enumerate(
                sorted(q.key, key=lambda b: sorted((n, v.canonical) for n, v in b)),
                start=1,
            ):
                bel = ET.SubElement(qel, "Binding", {"index": str(i)})
                for name, node in sorted(binding):
                    vel = ET.SubElement(bel, "Var", {"name": name})
                    vel.text = node.canonical
        elif isinstance(q, ChoiceQuery):
            ET.SubElement(qel, "Subject").text = q.subject.canonical
            ET.SubElement(qel, "Pred").text = "Relation:Unknown_1"
            ET.SubElement(qel, "Object").text = q.object.canonical
            for i, option in enumerate(q.options, start=1):
                oel = ET.SubElement(qel, "Option", {"index": str(i)})
                oel.text = encode_relation(option)
            cel = ET.SubElement(qel, "Correct", {"index": str(q.key + 1)})
            cel.text = encode_relation(q.options[q.key])
        else:
            qel.set("max_edges", str(q.max_edges))
            ET.SubElement(qel, "Source").text = q.source.canonical
            ET.SubElement(qel, "Target").text = q.target.canonical
            for i, path in enumerate(
                sorted(q.key, key=lambda p: (p.length, p.sort_key())), start=1
            ):
                qel.append(_path_element(path, i))
    return _document(root, CONFIDENTIAL_COMMENT)


def parse_key_xml(text: str) -> tuple[list[Query], dict[str, str]]:
    """Inverse of emit_key_xml: full Query values with their answer keys,
    plus the parameter echo from the root attributes."""
    root = _load_root(text, ("QAKey", "QBKey", "QCKey"))
    params = dict(root.attrib)
    queries: list[Query] = []
    seen: set[str] = set()
    for qel in root:
        _require(qel.tag == "Query", f"unknown element {qel.tag!r}")
        qid = qel.get("id")
        _require(bool(qid), "Query without an id attribute")
        _require(qid not in seen, f"duplicate query id {qid!r}")
        seen.add(qid)
        if root.tag == "QAKey":
            triples = []
            bindings = set()
            for cel in qel:
                if cel.tag == "Triple":
                    parts = {c.tag: (c.text or "") for c in cel}
                    _require(
                        set(parts) == {"Subject", "Pred", "Object"},
                        f"{qid}: Triple needs Subject/Pred/Object",
                    )
                    triples.append(
                        PatternTriple(
                            decode_node_ref(parts["Subject"]),
                            decode_relation(parts["Pred"]),
                            decode_node_ref(parts["Object"]),
                        )
                    )
                elif cel.tag == "Binding":
                    pairs = []
                    for vel in cel:
                        _require(vel.tag == "Var", f"unknown element {vel.tag!r}")
                        name = vel.get("name")
                        _require(bool(name), "Var without a name")
                        pairs.append((name, decode_node(vel.text or "")))
                    bindings.add(frozenset(pairs))
                else:
                    raise ProtocolError(f"unknown element {cel.tag!r} in {qid}")
            _require(bool(triples), f"{qid}: key without query triples")
            queries.append(FillQuery(qid, tuple(triples), frozenset(bindings)))
        elif root.tag == "QBKey":
            parts: dict[str, str] = {}
            options: list[tuple[int, str]] = []
            correct: list[int] = []
            for cel in qel:
                if cel.tag == "Option":
                    idx = cel.get("index")
                    _require(
                        idx is not None and idx.isdigit(),
                        f"{qid}: Option without a numeric index",
                    )
                    options.append((int(idx), decode_relation(cel.text or "")))
                elif cel.tag == "Correct":
                    idx = cel.get("index")
                    _require(
                        idx is not None and idx.isdigit(),
                        f"{qid}: Correct without a numeric index",
                    )
                    correct.append(int(idx))
                elif cel.tag in ("Subject", "Pred", "Object"):
                    parts[cel.tag] = cel.text or ""
                else:
                    raise ProtocolError(f"unknown element {cel.tag!r} in {qid}")
            _require(
                set(parts) == {"Subject", "Pred", "Object"},
                f"{qid}: key needs Subject/Pred/Object",
            )
            _require(len(correct) == 1, f"{qid}: need exactly one Correct")
            options.sort()
            _require(
                [i for i, _ in options] == list(range(1, len(options) + 1)),
                f"{qid}: option indices must be 1..n",
            )
            _require(
                1 <= correct[0] <= len(options), f"{qid}: Correct index out of range"
            )
            queries.append(
                ChoiceQuery(
                    qid,
                    decode_node(parts["Subject"]),
                    decode_node(parts["Object"]),
                    tuple(label for _, label in options),
                    correct[0] - 1,
                )
            )
        else:
            source = target = None
            paths = set()
            for cel in qel:
                if cel.tag == "Source":
                    source = decode_node(cel.text or "")
                elif cel.tag == "Target":
                    target = decode_node(cel.text or "")
                elif cel.tag == "Path":
                    paths.add(_parse_path_element(cel))
                else:
                    raise ProtocolError(f"unknown element {cel.tag!r} in {qid}")
            _require(
                source is not None and target is not None,
                f"{qid}: key needs Source and Target",
            )
            max_edges = qel.get("max_edges", "8")
            _require(max_edges.isdigit(), f"{qid}: bad max_edges")
            queries.append(
                PathQuery(qid, source, target, int(max_edges), frozenset(paths))
            )
    return queries, params


# --- submissions -------------------------------------------------------------


def emit_submission_a(sub: SubmissionA) -> str:
    root = ET.Element("QA", {"team": sub.team})
    for qid in sorted(sub.answers):
        qel = ET.SubElement(root, "Query", {"id": qid})
        for var in sorted(sub.answers[qid]):
            for rank, (node, conf) in enumerate(sub.answers[qid][var], start=1):
                ael = ET.SubElement(
                    qel,
                    "Answer",
                    {"var": var, "rank": str(rank), "confidence": f"{conf:g}"},
                )
                ael.text = node.canonical
    return _document(root)


def emit_submission_b(sub: SubmissionB) -> str:
    root = ET.Element("QB", {"team": sub.team})
    for qid in sorted(sub.answers):
        qel = ET.SubElement(root, "Query", {"id": qid})
        ET.SubElement(qel, "Answer").text = encode_relation(sub.answers[qid])
    return _document(root)


def emit_submission_c(sub: SubmissionC) -> str:
    root = ET.Element("QC", {"team": sub.team})
    for qid in sorted(sub.answers):
        qel = ET.SubElement(root, "Query", {"id": qid})
        for i, path in enumerate(sub.answers[qid], start=1):
            qel.append(_path_element(path, i))
    return _document(root)


def parse_submission_xml(
    text: str, expected: list[Query]
) -> tuple[SubmissionA | SubmissionB | SubmissionC, list[Diagnostic]]:
    """Match a submission document against the expected queries.  Malformed
    XML is fatal; per-item violations drop only that item with a
    diagnostic.  Queries with no usable answers are present but empty."""
    root = _load_root(text, ("QA", "QB", "QC"))
    team = root.get("team")
    _require(team is not None, "submission root must carry a team attribute")
    expected_ids = [q.id for q in expected]
    by_id = {q.id: q for q in expected}
    diagnostics: list[Diagnostic] = []

    def warn(where: str, message: str) -> None:
        diagnostics.append(Diagnostic("warning", where, message))

    if root.tag == "QA":
        sub = SubmissionA(team, {qid: {} for qid in expected_ids})
    elif root.tag == "QB":
        sub = SubmissionB(team, {})
    else:
        sub = SubmissionC(team, {qid: [] for qid in expected_ids})

    for qel in root:
        if qel.tag != "Query" or not qel.get("id"):
            warn(root.tag, f"ignored element {qel.tag!r} without a query id")
            continue
        qid = qel.get("id")
        if qid not in by_id:
            warn(qid, "submission references an unknown query id; ignored")
            continue
        query = by_id[qid]
        if root.tag == "QA":
            if not isinstance(query, FillQuery):
                warn(qid, "query id is not a fill query; ignored")
                continue
            raw: dict[str, list[tuple[int, float, NodeId]]] = {}
            for order, ael in enumerate(qel):
                if ael.tag != "Answer":
                    warn(qid, f"ignored element {ael.tag!r}")
                    continue
                var = ael.get("var")
                if not var or var not in query.variables:
                    warn(qid, f"answer for unknown variable {var!r}; dropped")
                    continue
                try:
                    conf = float(ael.get("confidence", "nan"))
                    node = decode_node(ael.text or "")
                except (ValueError, GraphError, ProtocolError) as exc:
                    warn(qid, f"unparseable answer dropped: {exc}")
                    continue
                if not (math.isfinite(conf) and 0.0 <= conf <= 1.0):
                    warn(qid, f"confidence {conf!r} outside [0,1]; answer dropped")
                    continue
                raw.setdefault(var, []).append((order, conf, node))
            for var, items in raw.items():
                # rank by descending confidence, ties by document order;
                # declared rank attributes must agree or the set is flagged
                ordered = sorted(items, key=lambda t: (-t[1], t[0]))
                rank_of_order = {o: str(i + 1) for i, (o, _, _) in enumerate(ordered)}
                for order, ael in enumerate(qel):
                    if ael.tag != "Answer" or ael.get("var") != var:
                        continue
                    declared = ael.get("rank")
                    if declared is not None and rank_of_order.get(order) != declared:
                        warn(
                            qid,
                            f"declared rank {declared} for {var} disagrees "
                            "with confidence ordering",
                        )
                sub.answers[qid][var] = [(node, conf) for _, conf, node in ordered]
        elif root.tag == "QB":
            if not isinstance(query, ChoiceQuery):
                warn(qid, "query id is not a choice query; ignored")
                continue
            answers = [c for c in qel if c.tag == "Answer"]
            if len(answers) != 1:
                warn(qid, f"expected exactly one Answer, got {len(answers)}; dropped")
                continue
            try:
                sub.answers[qid] = decode_relation(answers[0].text or "")
            except ProtocolError as exc:
                warn(qid, f"unparseable answer dropped: {exc}")
        else:
            if not isinstance(query, PathQuery):
                warn(qid, "query id is not a path query; ignored")
                continue
            for pel in qel:
                if pel.tag != "Path":
                    warn(qid, f"ignored element {pel.tag!r}")
                    continue
                try:
                    path = _parse_path_element(pel)
                except (ProtocolError, GraphError, OracleError) as exc:
                    warn(qid, f"unparseable path dropped: {exc}")
                    continue
                if path.source != query.source or path.target != query.target:
                    warn(qid, "path endpoints do not match the query; dropped")
                    continue
                sub.answers[qid].append(path)

    if root.tag == "QB":
        for qid in expected_ids:
            if isinstance(by_id[qid], ChoiceQuery) and qid not in sub.answers:
                warn(qid, "no answer submitted; scored as wrong")
    return sub, diagnostics

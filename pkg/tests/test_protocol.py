import pytest

from kgbench.graph import entity, person
from kgbench.oracle import Path, PatternTriple, Variable
from kgbench.protocol import (
    ProtocolError,
    SubmissionA,
    SubmissionB,
    SubmissionC,
    decode_relation,
    emit_key_xml,
    emit_query_xml,
    emit_submission_a,
    emit_submission_b,
    emit_submission_c,
    encode_relation,
    parse_key_xml,
    parse_query_xml,
    parse_submission_xml,
)
from kgbench.querygen import (
    ChoiceQuery,
    FillQuery,
    PathQuery,
    generate_choice,
    generate_fill,
    generate_path,
)
from kgbench.rng import SplitMix64

X = Variable("Unknown_1", "Person")

SPOUSE_QUERY = FillQuery(
    "Q.A.1",
    (PatternTriple(X, "Spouse of", person("Marge")),),
    frozenset({frozenset({("Unknown_1", person("Homer"))})}),
)

PATH_QUERY = PathQuery(
    "Q.C.1",
    person("Superintendent Chalmers"),
    person("Lenny"),
    4,
    frozenset(),
)

CHALMERS_PATH = Path(
    (
        person("Superintendent Chalmers"),
        entity("Springfield Elementary"),
        person("Bart"),
        person("Homer"),
        person("Lenny"),
    ),
    ("Superintendent at", "Studied at by", "Child of", "Friend of"),
)


def test_relation_text_encoding():
    assert encode_relation("Spouse of") == "Relation:Spouse_of"
    assert decode_relation("Relation:Spouse_of") == "Spouse of"
    assert decode_relation("Relation: Superintendent_At ") == "Superintendent At"
    with pytest.raises(ProtocolError):
        decode_relation("Spouse_of")
    for label in ("Spouse of", "Attends", "In Relationship With"):
        assert decode_relation(encode_relation(label)) == label


def test_emit_fill_query_matches_vocabulary():
    text = emit_query_xml([SPOUSE_QUERY])
    assert "<Subject>Person:Unknown_1</Subject>" in text
    assert "<Pred>Relation:Spouse_of</Pred>" in text
    assert "<Object>Person:Marge</Object>" in text
    assert "Homer" not in text  # answer keys never serialized


def test_empty_query_list():
    text = emit_query_xml([])
    assert parse_query_xml(text) == []


def test_query_round_trip_fill():
    parsed = parse_query_xml(emit_query_xml([SPOUSE_QUERY]))
    assert len(parsed) == 1
    assert parsed[0].id == SPOUSE_QUERY.id
    assert parsed[0].triples == SPOUSE_QUERY.triples
    assert parsed[0].key == frozenset()  # keyless


def test_query_round_trip_choice_and_path():
    choice = ChoiceQuery(
        "Q.B.1",
        person("Ms. Krabappel"),
        entity("Springfield Elementary"),
        ("Child of", "Teacher at", "Attends"),
        1,
    )
    parsed = parse_query_xml(emit_query_xml([choice]))
    assert parsed[0].id == choice.id
    assert parsed[0].options == choice.options
    assert parsed[0].key == -1  # keyless
    parsed = parse_query_xml(emit_query_xml([PATH_QUERY]))
    assert parsed[0].source == PATH_QUERY.source
    assert parsed[0].max_edges == 4


def test_query_errors():
    with pytest.raises(ProtocolError, match="malformed XML"):
        parse_query_xml("<QA><unclosed>")
    with pytest.raises(ProtocolError, match="single query type"):
        emit_query_xml([SPOUSE_QUERY, PATH_QUERY])
    with pytest.raises(ProtocolError, match="duplicate query id"):
        parse_query_xml(
            '<QA><Query id="Q.A.1"><Triple><Subject>Person:Unknown_1</Subject>'
            "<Pred>Relation:Spouse_of</Pred><Object>Person:Marge</Object></Triple>"
            '</Query><Query id="Q.A.1"><Triple><Subject>Person:Unknown_1</Subject>'
            "<Pred>Relation:Spouse_of</Pred><Object>Person:Marge</Object></Triple>"
            "</Query></QA>"
        )
    with pytest.raises(ProtocolError, match="Subject/Pred/Object"):
        parse_query_xml(
            '<QA><Query id="Q.A.1"><Triple><Subject>Person:X</Subject>'
            "</Triple></Query></QA>"
        )
    with pytest.raises(ProtocolError, match="unknown element"):
        parse_query_xml('<QA><Query id="Q.A.1"><Bogus/></Query></QA>')


def test_key_round_trips(simpsons):
    fill = generate_fill(simpsons, 3, 3)
    choice = generate_choice(simpsons, 4, 3)
    paths = generate_path(simpsons, 5, 2, 4)
    for queries in (fill, choice, paths):
        text = emit_key_xml(queries, {"seed": "3"})
        parsed, params = parse_key_xml(text)
        assert params == {"seed": "3"}
        assert parsed == queries
        for orig, back in zip(queries, parsed):
            assert back.key == orig.key
        assert "CONFIDENTIAL" in text


def test_submission_round_trip_a():
    sub = SubmissionA(
        "team1",
        {
            "Q.A.1": {
                "Unknown_1": [(person("Homer"), 0.9), (person("Bart"), 0.4)],
            }
        },
    )
    parsed, diags = parse_submission_xml(emit_submission_a(sub), [SPOUSE_QUERY])
    assert not diags
    assert parsed.team == "team1"
    assert parsed.answers == sub.answers


def test_submission_a_confidence_range():
    text = (
        '<QA team="t"><Query id="Q.A.1">'
        '<Answer var="Unknown_1" confidence="1.5">Person:Homer</Answer>'
        '<Answer var="Unknown_1" confidence="0.5">Person:Bart</Answer>'
        "</Query></QA>"
    )
    parsed, diags = parse_submission_xml(text, [SPOUSE_QUERY])
    assert any("confidence" in d.message for d in diags)
    assert parsed.answers["Q.A.1"]["Unknown_1"] == [(person("Bart"), 0.5)]


def test_submission_a_ties_break_by_document_order():
    text = (
        '<QA team="t"><Query id="Q.A.1">'
        '<Answer var="Unknown_1" confidence="0.5">Person:Bart</Answer>'
        '<Answer var="Unknown_1" confidence="0.5">Person:Homer</Answer>'
        "</Query></QA>"
    )
    parsed, _ = parse_submission_xml(text, [SPOUSE_QUERY])
    assert [n.name for n, _ in parsed.answers["Q.A.1"]["Unknown_1"]] == ["Bart", "Homer"]


def test_submission_a_inconsistent_rank_flagged():
    text = (
        '<QA team="t"><Query id="Q.A.1">'
        '<Answer var="Unknown_1" rank="2" confidence="0.9">Person:Homer</Answer>'
        '<Answer var="Unknown_1" rank="1" confidence="0.1">Person:Bart</Answer>'
        "</Query></QA>"
    )
    parsed, diags = parse_submission_xml(text, [SPOUSE_QUERY])
    assert any("disagrees" in d.message for d in diags)
    # confidence ordering wins
    assert parsed.answers["Q.A.1"]["Unknown_1"][0][0] == person("Homer")


def test_submission_missing_team():
    with pytest.raises(ProtocolError, match="team"):
        parse_submission_xml("<QA/>", [SPOUSE_QUERY])


def test_empty_submission_has_all_queries():
    parsed, _ = parse_submission_xml('<QA team="t"/>', [SPOUSE_QUERY])
    assert parsed.answers == {"Q.A.1": {}}


def test_submission_unknown_query_id_diagnostic():
    text = '<QB team="t"><Query id="Q.B.9"><Answer>Relation:Attends</Answer></Query></QB>'
    choice = ChoiceQuery("Q.B.1", person("A"), person("B"), ("Attends",), 0)
    parsed, diags = parse_submission_xml(text, [choice])
    assert any("unknown query id" in d.message for d in diags)
    assert "Q.B.9" not in parsed.answers


def test_submission_b_round_trip():
    choice = ChoiceQuery("Q.B.1", person("A"), person("B"), ("Attends", "Child of"), 0)
    sub = SubmissionB("t", {"Q.B.1": "Attends"})
    parsed, diags = parse_submission_xml(emit_submission_b(sub), [choice])
    assert not diags
    assert parsed.answers == sub.answers


def test_submission_b_multiple_answers_dropped():
    choice = ChoiceQuery("Q.B.1", person("A"), person("B"), ("Attends",), 0)
    text = (
        '<QB team="t"><Query id="Q.B.1"><Answer>Relation:Attends</Answer>'
        "<Answer>Relation:Child_of</Answer></Query></QB>"
    )
    parsed, diags = parse_submission_xml(text, [choice])
    assert "Q.B.1" not in parsed.answers
    assert any("exactly one Answer" in d.message for d in diags)


def test_submission_c_round_trip_and_checks():
    sub = SubmissionC("t", {"Q.C.1": [CHALMERS_PATH]})
    text = emit_submission_c(sub)
    assert "<Source>Person:Superintendent Chalmers</Source>" in text
    assert "<Edge>Relation:Superintendent_at</Edge>" in text
    assert "<Target>Person:Lenny</Target>" in text
    parsed, diags = parse_submission_xml(text, [PATH_QUERY])
    assert not diags
    assert parsed.answers["Q.C.1"] == [CHALMERS_PATH]


def test_submission_c_bad_alternation():
    text = (
        '<QC team="t"><Query id="Q.C.1"><Path index="1">'
        "<Source>Person:Superintendent Chalmers</Source>"
        "<Node>Person:Bart</Node>"
        "<Target>Person:Lenny</Target></Path></Query></QC>"
    )
    parsed, diags = parse_submission_xml(text, [PATH_QUERY])
    assert parsed.answers["Q.C.1"] == []
    assert any("dropped" in d.message for d in diags)


def test_submission_c_endpoint_mismatch():
    wrong = Path((person("Homer"), person("Lenny")), ("Friend of",))
    text = emit_submission_c(SubmissionC("t", {"Q.C.1": [wrong]}))
    parsed, diags = parse_submission_xml(text, [PATH_QUERY])
    assert parsed.answers["Q.C.1"] == []
    assert any("endpoints" in d.message for d in diags)


def _noise(seed: int, n: int) -> str:
    rng = SplitMix64(seed)
    alphabet = "<>/=\"' abZ09_:.&;"
    return "".join(alphabet[rng.randrange(len(alphabet))] for _ in range(n))


@pytest.mark.parametrize("seed", range(30))
def test_parser_totality_on_noise(seed):
    text = _noise(seed, 150)
    for fn in (parse_query_xml, parse_key_xml):
        try:
            fn(text)
        except (ProtocolError, ValueError):
            pass
    try:
        parse_submission_xml(text, [SPOUSE_QUERY])
    except (ProtocolError, ValueError):
        pass

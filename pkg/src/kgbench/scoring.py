"""Metrics over parsed submissions: mean reciprocal rank for fill queries,
accuracy for multiple choice, and path recall/precision/F1 with per-path
validity verdicts.

Conventions (all reported in the score report):
- a missing or absent correct answer scores reciprocal rank 0;
- precision counts duplicate submitted paths separately, recall counts
  distinct matches only;
- F1 is 0 when precision + recall is 0.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .graph import KnowledgeGraph, NodeId
from .oracle import Path
from .protocol import SubmissionA, SubmissionB, SubmissionC
from .querygen import ChoiceQuery, FillQuery, PathQuery

REPORT_VERSION = 1


def reciprocal_rank(key: set[NodeId], answers: list[NodeId]) -> float:
    """1/rank of the first answer in `key`, 0 when none is."""
    for rank, answer in enumerate(answers, start=1):
        if answer in key:
            return 1.0 / rank
    return 0.0


@dataclass(frozen=True)
class FillScore:
    query_id: str
    per_variable: dict[str, float]
    mrr: float


def score_fill(query: FillQuery, sub: SubmissionA) -> FillScore:
    """Per-variable reciprocal ranks, averaged over the query's variables.
    With a multi-binding key, any keyed node for a variable counts."""
    per_var: dict[str, float] = {}
    answered = sub.answers.get(query.id, {})
    for var in query.variables:
        keyed = {node for binding in query.key for name, node in binding if name == var}
        ranked = [node for node, _ in answered.get(var, [])]
        per_var[var] = reciprocal_rank(keyed, ranked)
    mrr = sum(per_var.values()) / len(per_var) if per_var else 0.0
    return FillScore(query.id, per_var, mrr)


@dataclass(frozen=True)
class ChoiceScore:
    total: int
    correct: int
    per_query: dict[str, bool]

    @property
    def accuracy(self) -> float:
        return self.correct / self.total if self.total else 0.0


def score_choice(queries: list[ChoiceQuery], sub: SubmissionB) -> ChoiceScore:
    """Fraction of all generated questions answered with the keyed option;
    unanswered counts as wrong."""
    per_query = {
        q.id: sub.answers.get(q.id) == q.options[q.key] for q in queries
    }
    return ChoiceScore(len(queries), sum(per_query.values()), per_query)


@dataclass(frozen=True)
class PathVerdict:
    valid: bool
    reason: str | None = None

    def __str__(self) -> str:
        return "valid" if self.valid else f"invalid({self.reason})"


def validate_path(graph: KnowledgeGraph, query: PathQuery, path: Path) -> PathVerdict:
    """Structural validity: endpoints match the query, every step is a
    traversal-view edge under the submitted label, the path is simple, and
    the length respects the query bound."""
    if path.source != query.source:
        return PathVerdict(False, f"source is {path.source}, query asks {query.source}")
    if path.target != query.target:
        return PathVerdict(False, f"target is {path.target}, query asks {query.target}")
    if len(set(path.nodes)) != len(path.nodes):
        return PathVerdict(False, "not simple: a node repeats")
    if path.length > query.max_edges:
        return PathVerdict(
            False, f"length {path.length} exceeds bound {query.max_edges}"
        )
    for i, (a, rel, b) in enumerate(
        zip(path.nodes[:-1], path.relations, path.nodes[1:]), start=1
    ):
        if a not in graph.nodes:
            return PathVerdict(False, f"node {a} not in graph")
        if b not in graph.nodes:
            return PathVerdict(False, f"node {b} not in graph")
        if rel not in graph.ontology or not graph.has_link(a, rel, b):
            return PathVerdict(False, f"edge {i} ({a} -[{rel}]-> {b}) not in graph")
    return PathVerdict(True)


@dataclass(frozen=True)
class PathScore:
    query_id: str
    recall: float
    precision: float
    f1: float
    verdicts: tuple[PathVerdict, ...]


def f1_score(precision: float, recall: float) -> float:
    if precision + recall == 0.0:
        return 0.0
    return 2.0 * precision * recall / (precision + recall)


def score_paths(
    graph: KnowledgeGraph, query: PathQuery, submitted: list[Path]
) -> PathScore:
    """Recall over the key from distinct valid matches; precision over all
    submitted entries, duplicates counted."""
    verdicts = tuple(validate_path(graph, query, p) for p in submitted)
    matched = {
        p for p, v in zip(submitted, verdicts) if v.valid and p in query.key
    }
    recall = len(matched) / len(query.key) if query.key else 0.0
    precision = len(matched) / len(submitted) if submitted else 0.0
    return PathScore(query.id, recall, precision, f1_score(precision, recall), verdicts)


@dataclass
class ScoreReport:
    """Per-query scores plus per-type aggregates and a parameter echo."""

    team: str
    parameters: dict[str, str] = field(default_factory=dict)
    fill: list[FillScore] = field(default_factory=list)
    choice: ChoiceScore | None = None
    paths: list[PathScore] = field(default_factory=list)

    @property
    def fill_mrr_mean(self) -> float:
        """Run-level mean of per-query MRRs."""
        return sum(s.mrr for s in self.fill) / len(self.fill) if self.fill else 0.0

    @property
    def fill_mrr_variables(self) -> float:
        """Run-level mean over every variable's reciprocal rank."""
        ranks = [rr for s in self.fill for rr in s.per_variable.values()]
        return sum(ranks) / len(ranks) if ranks else 0.0

    @property
    def path_macro(self) -> tuple[float, float, float]:
        if not self.paths:
            return (0.0, 0.0, 0.0)
        n = len(self.paths)
        return (
            sum(s.recall for s in self.paths) / n,
            sum(s.precision for s in self.paths) / n,
            sum(s.f1 for s in self.paths) / n,
        )

    def to_json_dict(self) -> dict:
        recall, precision, f1 = self.path_macro
        return {
            "report_version": REPORT_VERSION,
            "team": self.team,
            "parameters": dict(sorted(self.parameters.items())),
            "type_a": {
                "num_queries": len(self.fill),
                "mrr_mean_of_queries": self.fill_mrr_mean,
                "mrr_mean_of_variables": self.fill_mrr_variables,
                "per_query": [
                    {
                        "id": s.query_id,
                        "mrr": s.mrr,
                        "per_variable": dict(sorted(s.per_variable.items())),
                    }
                    for s in self.fill
                ],
            },
            "type_b": None
            if self.choice is None
            else {
                "num_queries": self.choice.total,
                "correct": self.choice.correct,
                "accuracy": self.choice.accuracy,
                "per_query": dict(sorted(self.choice.per_query.items())),
            },
            "type_c": {
                "num_queries": len(self.paths),
                "recall": recall,
                "precision": precision,
                "f1": f1,
                "per_query": [
                    {
                        "id": s.query_id,
                        "recall": s.recall,
                        "precision": s.precision,
                        "f1": s.f1,
                        "verdicts": [str(v) for v in s.verdicts],
                    }
                    for s in self.paths
                ],
            },
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), indent=2, sort_keys=False) + "\n"

    def to_text(self) -> str:
        recall, precision, f1 = self.path_macro
        lines = [
            f"Score report (team: {self.team})",
            "=" * 40,
        ]
        if self.parameters:
            lines.append("parameters: " + ", ".join(
                f"{k}={v}" for k, v in sorted(self.parameters.items())
            ))
        lines.append("")
        lines.append(f"Type A (fill):    {len(self.fill)} queries")
        lines.append(f"  MRR (mean of query MRRs):    {self.fill_mrr_mean:.6f}")
        lines.append(f"  MRR (mean over variables):   {self.fill_mrr_variables:.6f}")
        for s in self.fill:
            detail = ", ".join(f"{v}={rr:.4f}" for v, rr in sorted(s.per_variable.items()))
            lines.append(f"    {s.query_id}: mrr={s.mrr:.6f} ({detail})")
        lines.append("")
        if self.choice is not None:
            lines.append(
                f"Type B (choice):  {self.choice.correct}/{self.choice.total} "
                f"correct, accuracy {self.choice.accuracy:.6f}"
            )
        else:
            lines.append("Type B (choice):  not scored")
        lines.append("")
        lines.append(f"Type C (paths):   {len(self.paths)} queries")
        lines.append(
            f"  macro recall {recall:.6f}  precision {precision:.6f}  f1 {f1:.6f}"
        )
        for s in self.paths:
            lines.append(
                f"    {s.query_id}: r={s.recall:.4f} p={s.precision:.4f} "
                f"f1={s.f1:.4f} paths={len(s.verdicts)}"
            )
        return "\n".join(lines) + "\n"


def aggregate(
    team: str,
    parameters: dict[str, str] | None = None,
    fill: list[FillScore] | None = None,
    choice: ChoiceScore | None = None,
    paths: list[PathScore] | None = None,
) -> ScoreReport:
    report = ScoreReport(team, dict(parameters or {}))
    report.fill = list(fill or [])
    report.choice = choice
    report.paths = list(paths or [])
    return report

"""Ontologically coded issues: parsing, integrity checks, ordering, drafts."""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from typing import Iterable, Optional, Union

from .digraph import find_cycles, topological_order
from .graph import Graph
from .rules import Finding, ValidationReport
from .terms import IRI, XSD_STRING, Literal, Triple, local_name
from .turtle import serialize_turtle
from .vocab import Vocabulary, VocabularyError

STATUSES = ("open", "resolved")
_ISSUE_FIELDS = ("issue_class", "issue_target", "issue_critique", "issue_suggestion",
                 "issue_resolve_after")


@dataclass(frozen=True)
class Issue:
    id: IRI
    target: Union[IRI, Literal, None]
    critique: str
    suggestion: str
    resolve_after: frozenset = frozenset()
    status: str = "open"

    def to_dict(self) -> dict:
        target = self.target.value if isinstance(self.target, IRI) else (
            self.target.lexical if isinstance(self.target, Literal) else None)
        return {"id": self.id.value, "target": target, "critique": self.critique,
                "suggestion": self.suggestion,
                "resolveAfter": sorted(i.value for i in self.resolve_after),
                "status": self.status}


@dataclass(frozen=True)
class IssueLedger:
    issues: tuple = ()
    defects: tuple = ()
    order: Optional[tuple] = None

    def __post_init__(self):
        ids = [i.id for i in self.issues]
        if len(set(ids)) != len(ids):
            raise ValueError("duplicate issue ids")
        if self.order is not None:
            pos = {i: n for n, i in enumerate(self.order)}
            for i in self.issues:
                if any(d in pos and pos[d] > pos[i.id] for d in i.resolve_after):
                    raise ValueError(f"order violates resolveAfter of <{i.id.value}>")

    def __len__(self):
        return len(self.issues)

    def get(self, iri: IRI) -> Optional[Issue]:
        return next((i for i in self.issues if i.id == iri), None)

    @property
    def ids(self) -> set:
        return {i.id for i in self.issues}


def require_issue_vocabulary(v: Vocabulary) -> None:
    missing = [f for f in _ISSUE_FIELDS if getattr(v, f) is None]
    if missing:
        raise VocabularyError("issue vocabulary not configured: " + ", ".join(missing))


def _text(g: Graph, s: IRI, p: IRI) -> list[str]:
    return sorted(o.lexical if isinstance(o, Literal) else o.value
                  for o in g.objects(s, p) if isinstance(o, (Literal, IRI)))


def _status(g: Graph, s: IRI, v: Vocabulary) -> str:
    if v.issue_status is None:
        return "open"
    for o in g.objects(s, v.issue_status):
        text = o.lexical if isinstance(o, Literal) else local_name(o) if isinstance(o, IRI) else ""
        if text.lower() == "resolved":
            return "resolved"
    return "open"


def parse_issues(g: Graph, v: Vocabulary) -> IssueLedger:
    """One issue per instance of the issue class; gaps become defects."""
    require_issue_vocabulary(v)
    issues, defects = [], []
    for s in sorted({s for s in g.subjects(v.type_prop, v.issue_class) if isinstance(s, IRI)}):
        targets = sorted(g.objects(s, v.issue_target), key=lambda o: (not isinstance(o, IRI), str(o)))
        target = targets[0] if targets else None
        if target is None:
            defects.append(Finding("ISSUE-TARGET", s, "issue has no target", "error"))
        elif len(targets) > 1:
            defects.append(Finding("ISSUE-TARGET", s, f"issue has {len(targets)} targets; using the first",
                                   "warning"))
        critique = "\n".join(_text(g, s, v.issue_critique))
        suggestion = "\n".join(_text(g, s, v.issue_suggestion))
        after = frozenset(o for o in g.objects(s, v.issue_resolve_after) if isinstance(o, IRI))
        if len(after) != len(g.objects(s, v.issue_resolve_after)):
            defects.append(Finding("ISSUE-DANGLING", s, "resolveAfter refers to a non-IRI value", "error"))
        issues.append(Issue(s, target, critique, suggestion, after, _status(g, s, v)))
    return IssueLedger(tuple(issues), tuple(defects))


def check_issues(ledger: IssueLedger) -> list[Finding]:
    """Dangling and self references, dependency cycles, empty texts."""
    out = list(ledger.defects)
    ids = ledger.ids
    for i in ledger.issues:
        for field_name, text in (("critique", i.critique), ("suggestion", i.suggestion)):
            if not text.strip():
                out.append(Finding("ISSUE-EMPTY", i.id, f"issue has an empty {field_name}", "error"))
        for d in sorted(i.resolve_after):
            if d == i.id:
                out.append(Finding("ISSUE-SELF", i.id, "issue must be resolved after itself", "error"))
            elif d not in ids:
                out.append(Finding("ISSUE-DANGLING", i.id, f"resolveAfter refers to unknown issue <{d.value}>",
                                   "error"))
    edges = {(d, i.id) for i in ledger.issues for d in i.resolve_after if d in ids and d != i.id}
    for cycle in find_cycles(ids, edges):
        members = sorted(cycle)
        out.append(Finding("ISSUE-CYCLE", members[0], "resolveAfter cycle among "
                           + ", ".join(f"<{m.value}>" for m in members), "error"))
    unique = {(f.rule_id, f.focus, f.message): f for f in out}
    return sorted(unique.values(), key=Finding.sort_key)


def order_issues(ledger: IssueLedger) -> list[Issue]:
    """Topological order over resolveAfter; ties by IRI.  Raises CycleError."""
    ids = ledger.ids
    edges = {(d, i.id) for i in ledger.issues for d in i.resolve_after if d in ids}
    by_id = {i.id: i for i in ledger.issues}
    return [by_id[x] for x in topological_order(ids, edges)]


# -- drafts from findings ---------------------------------------------------------

SUGGESTIONS = {
    "ICD": "Categorize <{focus}> by asserting a type from the ontology's classes, or make it a category.",
    "DIE": "Add further instances to <{focus}> or dissolve the class into its sibling categories.",
    "DIE-EMPTY": "Populate <{focus}> or remove the class.",
    "DSE": "Add sibling subclasses under <{focus}> or merge the single subclass into it.",
    "METAMODELING": "Type the punned entity <{focus}> and give it instances or subclasses.",
    "KRL-CLASS-COMMENT": "Add an rdfs:comment documenting <{focus}>.",
    "KRL-PROPERTY-COMMENT": "Add an rdfs:comment documenting <{focus}>.",
    "KRL-CLASS-LINK": "Link <{focus}> to its Wikipedia page via foaf:isPrimaryTopicOf.",
    "KRL-PROPERTY-LINK": "Link <{focus}> to its Wikipedia page via foaf:isPrimaryTopicOf.",
    "KRL-INDIVIDUAL-LINK": "Link <{focus}> to its Wikipedia page via foaf:isPrimaryTopicOf.",
    "SAR": "Associate <{focus}> with between one and three subject areas.",
    "SPACE-CONFORMS": "Relate two artifact types of the space <{focus}> by conformsTo.",
    "SPACE-SPECIFIED": "Associate languages, tools and artifacts with the space <{focus}>.",
    "ACTIVITY-SPECIFIED": "Link the activity <{focus}> to artifact types and to languages or tools.",
    "APPROACH-SPECIFIED": "Connect the approach <{focus}> to a formal entity or language.",
    "DISJOINT": "Remove one of the conflicting type assertions on <{focus}> or revise the disjointness axiom.",
    "TLR": "Move <{focus}> under one of the established top-level roots.",
    "TBOX-CENTRAL": "Move the declaration of <{focus}> into the tbox module.",
}
DEFAULT_SUGGESTION = "Revise <{focus}> so that rule {rule} holds."


def draft_id(rule_id: str, focus: IRI, namespace: str) -> IRI:
    digest = hashlib.sha256(f"{rule_id}\t{focus.value}".encode("utf-8")).hexdigest()
    return IRI(f"{namespace}draft-{digest[:32]}")


def findings_to_issues(report: ValidationReport, namespace: str,
                       severities: Iterable[str] = ("error",),
                       templates: Optional[dict] = None) -> IssueLedger:
    """One open draft issue per unsuppressed finding of the given severities."""
    templates = {**SUGGESTIONS, **(templates or {})}
    wanted = set(severities)
    issues = {}
    for f in report.findings:
        if f.suppressed or f.severity not in wanted:
            continue
        iid = draft_id(f.rule_id, f.focus, namespace)
        text = templates.get(f.rule_id, DEFAULT_SUGGESTION).format(focus=f.focus.value, rule=f.rule_id)
        issues[iid] = Issue(iid, f.focus, f"[{f.rule_id}] {f.message}", text)
    return IssueLedger(tuple(issues[k] for k in sorted(issues)))


# -- serialization ------------------------------------------------------------------

def ledger_to_graph(ledger: IssueLedger, v: Vocabulary, prefixes: Optional[dict] = None) -> Graph:
    require_issue_vocabulary(v)
    triples = []
    for i in ledger.issues:
        triples.append(Triple(i.id, v.type_prop, v.issue_class))
        if i.target is not None:
            triples.append(Triple(i.id, v.issue_target, i.target))
        if i.critique:
            triples.append(Triple(i.id, v.issue_critique, Literal(i.critique, XSD_STRING)))
        if i.suggestion:
            triples.append(Triple(i.id, v.issue_suggestion, Literal(i.suggestion, XSD_STRING)))
        for d in sorted(i.resolve_after):
            triples.append(Triple(i.id, v.issue_resolve_after, d))
        if i.status != "open" and v.issue_status is not None:
            triples.append(Triple(i.id, v.issue_status, Literal(i.status, XSD_STRING)))
    return Graph(triples, prefixes or {})


def issues_to_turtle(ledger: IssueLedger, v: Vocabulary, prefixes: Optional[dict] = None) -> str:
    return serialize_turtle(ledger_to_graph(ledger, v, prefixes))


def issues_to_json(ledger: IssueLedger, ordered: Optional[list] = None) -> str:
    seq = ordered if ordered is not None else list(ledger.issues)
    return json.dumps([i.to_dict() for i in seq], indent=2, ensure_ascii=False) + "\n"

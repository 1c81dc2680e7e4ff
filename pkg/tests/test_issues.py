"""Issue ledger parsing, integrity, ordering and drafts."""

import json
import random
from dataclasses import replace

import pytest
from hypothesis import given, settings, strategies as st

from ontoqc.digraph import CycleError
from ontoqc.graph import Graph
from ontoqc.issues import (Issue, IssueLedger, check_issues, draft_id, findings_to_issues,
                           issues_to_json, issues_to_turtle, ledger_to_graph, order_issues,
                           parse_issues)
from ontoqc.rules import Finding, ValidationReport
from ontoqc.terms import IRI, Literal
from ontoqc.turtle import parse_file, parse_turtle
from ontoqc.vocab import DEFAULT_ISSUES_NS, Vocabulary, VocabularyError
from conftest import FIXTURES
import oracles

V = Vocabulary()
NS = DEFAULT_ISSUES_NS


def iri(name):
    return IRI(NS + name)


def issue(name, after=(), critique="c", suggestion="s"):
    return Issue(iri(name), IRI("http://e.org/t"), critique, suggestion, frozenset(iri(a) for a in after))


def rules_of(findings):
    return {(f.rule_id, f.focus.value.replace(NS, "")) for f in findings}


# -- parsing --------------------------------------------------------------------------

def test_empty_graph_gives_empty_ledger():
    assert len(parse_issues(Graph(), V)) == 0


def test_three_issue_fixture():
    ledger = parse_issues(parse_file(FIXTURES / "issues.ttl"), V)
    assert {i.id.value.replace(NS, "") for i in ledger.issues} == {
        "renameUsesLanguage", "moveCompilerToTools", "dropLanguagesImport"}
    edges = {(d.value.replace(NS, ""), i.id.value.replace(NS, "")) for i in ledger.issues for d in i.resolve_after}
    assert edges == {("renameUsesLanguage", "moveCompilerToTools"),
                     ("moveCompilerToTools", "dropLanguagesImport")}
    rename = ledger.get(iri("renameUsesLanguage"))
    assert rename.target == IRI(V.issue_class.value.replace("Issue", "usesLanguage"))
    assert rename.critique.startswith("The property name") and rename.status == "open"
    assert check_issues(ledger) == []
    assert [i.id.value.replace(NS, "") for i in order_issues(ledger)] == [
        "renameUsesLanguage", "moveCompilerToTools", "dropLanguagesImport"]


def test_missing_fields_are_defects_not_crashes():
    g = parse_turtle(f"""@prefix tbox: <{V.issue_class.value[:-5]}> . @prefix i: <{NS}> .
    i:x a tbox:Issue . i:y a tbox:Issue ; tbox:target "a literal" ; tbox:critique "c" ; tbox:suggestion "s" .""")
    ledger = parse_issues(g, V)
    found = rules_of(check_issues(ledger))
    assert {("ISSUE-TARGET", "x"), ("ISSUE-EMPTY", "x")} <= found
    assert not any(f == "y" for _, f in found)
    assert ledger.get(iri("y")).target == Literal("a literal")


def test_missing_vocabulary_is_an_error():
    with pytest.raises(VocabularyError):
        parse_issues(Graph(), replace(V, issue_class=None))


def test_status_extension():
    g = parse_turtle(f"""@prefix tbox: <{V.issue_class.value[:-5]}> . @prefix i: <{NS}> .
    i:x a tbox:Issue ; tbox:target tbox:T ; tbox:critique "c" ; tbox:suggestion "s" ; tbox:status "resolved" .""")
    assert parse_issues(g, V).issues[0].status == "resolved"


# -- integrity --------------------------------------------------------------------------

def test_cycle_names_both():
    ledger = parse_issues(parse_file(FIXTURES / "issues_cyclic.ttl"), V)
    (f,) = check_issues(ledger)
    assert f.rule_id == "ISSUE-CYCLE" and NS + "A" in f.message and NS + "B" in f.message
    with pytest.raises(CycleError) as e:
        order_issues(ledger)
    assert {NS + "A", NS + "B"} <= set(str(e.value).replace("<", " ").replace(">", " ").split())


def test_self_and_dangling():
    ledger = IssueLedger((issue("a", ["a"]), issue("b", ["ghost"]), issue("c", critique=" ")))
    assert rules_of(check_issues(ledger)) == {("ISSUE-SELF", "a"), ("ISSUE-DANGLING", "b"),
                                              ("ISSUE-EMPTY", "c")}


def _oracle_findings(issues):
    ids = {i.id for i in issues}
    out = set()
    for i in issues:
        if not i.critique.strip() or not i.suggestion.strip():
            out.add(("ISSUE-EMPTY", i.id.value))
        for d in i.resolve_after:
            if d == i.id:
                out.add(("ISSUE-SELF", i.id.value))
            elif d not in ids:
                out.add(("ISSUE-DANGLING", i.id.value))
    edges = {(d.value, i.id.value) for i in issues for d in i.resolve_after if d in ids and d != i.id}
    cyclic = {n.value for n in ids
              if any(n.value in oracles.reachable(edges, b) for a, b in edges if a == n.value)}
    return out, cyclic


@pytest.mark.parametrize("seed", range(25))
def test_random_ledgers_match_edge_checks(seed):
    rng = random.Random(seed)
    names = [f"i{n:02d}" for n in range(30)]
    issues = []
    for k, n in enumerate(names):
        after = [names[j] for j in range(k) if rng.random() < 0.08]
        roll = rng.random()
        if roll < 0.05:
            after.append(n)
        elif roll < 0.10:
            after.append("missing" + n)
        elif roll < 0.15 and k + 1 < len(names):
            after.append(names[rng.randrange(k + 1, len(names))])
        issues.append(issue(n, after, critique="" if rng.random() < 0.05 else "c"))
    ledger = IssueLedger(tuple(issues))
    found = check_issues(ledger)
    plain, cyclic = _oracle_findings(issues)
    assert {(f.rule_id, f.focus.value) for f in found if f.rule_id != "ISSUE-CYCLE"} == plain
    named = set()
    for f in found:
        if f.rule_id == "ISSUE-CYCLE":
            named |= {x for x in (NS + n for n in names) if f"<{x}>" in f.message}
    assert named == cyclic


# -- ordering ----------------------------------------------------------------------------

def test_tie_break_and_chain():
    assert [i.id for i in order_issues(IssueLedger((issue("B"), issue("A"))))] == [iri("A"), iri("B")]
    chain = IssueLedger((issue("C", ["B"]), issue("B", ["A"]), issue("A")))
    assert [i.id for i in order_issues(chain)] == [iri("A"), iri("B"), iri("C")]
    late = IssueLedger((issue("A", ["Z"]), issue("Z")))
    assert [i.id for i in order_issues(late)] == [iri("Z"), iri("A")]


@settings(max_examples=150, deadline=None)
@given(st.integers(1, 30).flatmap(lambda n: st.tuples(
    st.just(n), st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)), max_size=3 * n),
    st.permutations(range(n)))))
def test_random_dag_order(case):
    n, raw, perm = case
    names = [f"n{perm[k]:02d}" for k in range(n)]
    # orient every edge along the hidden permutation so the graph is acyclic
    constraints = {(names[min(a, b)], names[max(a, b)]) for a, b in raw if a != b}
    issues = [issue(x, [a for a, b in constraints if b == x]) for x in names]
    ordered = [i.id.value.replace(NS, "") for i in order_issues(IssueLedger(tuple(issues)))]
    assert len(ordered) == n and oracles.respects(ordered, constraints)
    assert ordered == oracles.lexicographic_topo(names, constraints)


def test_ledger_rejects_bad_order():
    with pytest.raises(ValueError):
        IssueLedger((issue("a", ["b"]), issue("b")), order=(iri("a"), iri("b")))
    with pytest.raises(ValueError):
        IssueLedger((issue("a"), issue("a")))


# -- drafts from findings ------------------------------------------------------------------

def _report(findings):
    findings = tuple(sorted(findings, key=Finding.sort_key))
    counts = {sev: sum(1 for f in findings if f.severity == sev and not f.suppressed)
              for sev in ("info", "warning", "error")}
    return ValidationReport(findings, counts, (), "fail" if counts["error"] else "pass", "error")


def test_findings_to_issues_basics():
    assert len(findings_to_issues(_report([]), NS)) == 0
    two = [Finding("KRL-CLASS-LINK", IRI("http://e.org/A"), "no link", "error"),
           Finding("DISJOINT", IRI("http://e.org/x"), "both", "error")]
    ledger = findings_to_issues(_report(two), NS)
    assert len(ledger) == 2 and len(ledger.ids) == 2
    assert all(i.id.value.startswith(NS + "draft-") and not i.resolve_after for i in ledger.issues)
    assert {i.target for i in ledger.issues} == {f.focus for f in two}
    assert findings_to_issues(_report(two), NS) == ledger
    assert check_issues(ledger) == []


def test_warnings_only_gives_empty_ledger():
    mixed = [Finding("DIE", IRI("http://e.org/C"), "m", "warning"),
             Finding("DIE-EMPTY", IRI("http://e.org/D"), "m", "info"),
             Finding("KRL-CLASS-LINK", IRI("http://e.org/E"), "m", "error", suppressed=True)]
    assert len(findings_to_issues(_report(mixed), NS)) == 0
    assert len(findings_to_issues(_report(mixed), NS, severities=("warning", "info"))) == 2


_focus = st.text("abcdefgh", min_size=1, max_size=5).map(lambda s: IRI("http://e.org/" + s))


@settings(max_examples=100)
@given(st.lists(st.tuples(st.sampled_from(["DIE", "DSE", "ICD", "SAR", "TLR"]), _focus), unique=True))
def test_draft_ids_injective(pairs):
    ids = {draft_id(r, f, NS) for r, f in pairs}
    assert len(ids) == len(pairs)


# -- serialization --------------------------------------------------------------------------

_text = st.text(st.characters(blacklist_categories=("Cs",), blacklist_characters="\x00"), min_size=1,
                max_size=20).filter(lambda s: s.strip())


@settings(max_examples=80, deadline=None)
@given(st.lists(st.tuples(_text, _text, st.booleans()), min_size=1, max_size=6))
def test_turtle_round_trip(specs):
    issues = []
    for k, (crit, sugg, lit_target) in enumerate(specs):
        target = Literal("resource " + str(k)) if lit_target else IRI(f"http://e.org/t{k}")
        after = frozenset(iri(f"x{j}") for j in range(k) if (j + k) % 2)
        issues.append(Issue(iri(f"x{k}"), target, crit, sugg, after))
    ledger = IssueLedger(tuple(issues))
    back = parse_issues(parse_turtle(issues_to_turtle(ledger, V, {"i": NS})), V)
    assert back == ledger


def test_fixture_round_trip_and_json():
    ledger = parse_issues(parse_file(FIXTURES / "issues.ttl"), V)
    assert parse_issues(ledger_to_graph(ledger, V), V) == ledger
    doc = json.loads(issues_to_json(ledger, order_issues(ledger)))
    assert [d["id"].replace(NS, "") for d in doc] == ["renameUsesLanguage", "moveCompilerToTools",
                                                      "dropLanguagesImport"]
    assert doc[1]["resolveAfter"] == [NS + "renameUsesLanguage"]

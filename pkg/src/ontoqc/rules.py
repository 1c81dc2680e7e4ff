"""Rule registry, the individual checks, and the validation report."""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field, replace
from itertools import combinations
from typing import Callable, Iterable, Optional
from urllib.parse import urlsplit

from .graph import Graph
from .index import EntityIndex, Taxonomy
from .tabular import csv_text
from .terms import IRI, OWL, RDFS, Literal
from .vocab import Vocabulary

SEVERITIES = ("info", "warning", "error")
_RANK = {s: i for i, s in enumerate(SEVERITIES)}


def severity_rank(severity: str) -> int:
    try:
        return _RANK[severity]
    except KeyError:
        raise ValueError(f"unknown severity {severity!r}") from None


@dataclass(frozen=True)
class Finding:
    rule_id: str
    focus: IRI
    message: str
    severity: str = "warning"
    module: Optional[IRI] = None
    suppressed: bool = False

    def __post_init__(self):
        if not isinstance(self.focus, IRI):
            raise TypeError(f"finding focus must be a named IRI, got {self.focus!r}")

    def sort_key(self) -> tuple:
        return (self.rule_id, self.focus.value, self.message)

    def to_dict(self) -> dict:
        return {"ruleId": self.rule_id, "focus": self.focus.value, "message": self.message,
                "severity": self.severity,
                "module": self.module.value if self.module else None,
                "suppressed": self.suppressed}

    @classmethod
    def from_dict(cls, d: dict) -> "Finding":
        return cls(d["ruleId"], IRI(d["focus"]), d["message"], d["severity"],
                   IRI(d["module"]) if d.get("module") else None, bool(d.get("suppressed")))


# -- exceptions ---------------------------------------------------------------

@dataclass(frozen=True, order=True)
class ExceptionEntry:
    rule_id: str
    focus: IRI
    reason: str = ""


class ExceptionList:
    def __init__(self, entries: Iterable[ExceptionEntry] = ()):
        self._entries: dict[tuple, ExceptionEntry] = {}
        for e in entries:
            self._entries.setdefault((e.rule_id, e.focus), e)

    def __iter__(self):
        return iter(sorted(self._entries.values()))

    def __len__(self):
        return len(self._entries)

    def get(self, rule_id: str, focus: IRI) -> Optional[ExceptionEntry]:
        return self._entries.get((rule_id, focus))

    def without(self, rule_id: str, focus: IRI) -> "ExceptionList":
        return ExceptionList(e for k, e in self._entries.items() if k != (rule_id, focus))

    @classmethod
    def parse(cls, text: str, origin: str = "<exceptions>") -> "ExceptionList":
        """One ``ruleId<TAB>focus-IRI<TAB>reason`` per line; ``#`` comments."""
        entries = []
        for n, line in enumerate(text.splitlines(), 1):
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) < 2 or not parts[0].strip() or not parts[1].strip():
                raise ValueError(f"{origin}:{n}: expected 'ruleId<TAB>focus<TAB>reason'")
            reason = "\t".join(parts[2:]).strip()
            entries.append(ExceptionEntry(parts[0].strip(), IRI(parts[1].strip().strip("<>")), reason))
        return cls(entries)

    @classmethod
    def load(cls, path) -> "ExceptionList":
        with open(path, encoding="utf-8") as fh:
            return cls.parse(fh.read(), str(path))


# -- rules ----------------------------------------------------------------------

@dataclass
class Context:
    g: Graph
    idx: EntityIndex
    v: Vocabulary
    import_graph: object = None
    tax: Taxonomy = field(init=False)

    def __post_init__(self):
        self.tax = Taxonomy(self.g, self.v)


@dataclass(frozen=True)
class Rule:
    id: str
    severity: str
    description: str
    check: Callable[[Context, dict], list]
    config: dict = field(default_factory=dict)

    def run(self, ctx: Context) -> list[Finding]:
        return [replace(f, severity=self.severity) for f in self.check(ctx, self.config)
                if f.rule_id == self.id]


def _scope(v: Vocabulary, config: dict) -> Callable[[object], bool]:
    namespaces = tuple(config.get("scopeNamespaces") or ())
    if namespaces:
        return lambda x: isinstance(x, IRI) and any(x.value.startswith(ns) for ns in namespaces)
    return v.in_scope


def _ctx(g, idx, v) -> Context:
    return Context(g, idx if idx is not None else _lazy_index(g, v), v)


def _lazy_index(g, v):
    from .index import classify_entities
    return classify_entities(g, v)


def _plural(n: int, word: str) -> str:
    return f"{n} {word}" + ("" if n == 1 else "s")


def _name(x: IRI) -> str:
    return x.value


# DIE ----------------------------------------------------------------------

def check_die(g: Graph, idx: EntityIndex, v: Vocabulary, config: Optional[dict] = None,
              ctx: Optional[Context] = None) -> list[Finding]:
    """Classes instantiated by fewer than ``minInstances`` direct individuals.

    Classes with no instances but with subclasses are abstract categories
    and exempt (``exemptWithSubclasses``); empty leaf classes are reported
    by :func:`check_empty_classes` instead.
    """
    config = config or {}
    ctx = ctx or _ctx(g, idx, v)
    minimum = int(config.get("minInstances", 2))
    exempt = bool(config.get("exemptWithSubclasses", True))
    in_scope = _scope(v, config)
    out = []
    for c in ctx.idx.classes():
        if not in_scope(c):
            continue
        n = len(ctx.tax.direct_instances(c))
        has_subs = bool(ctx.tax.subs.get(c))
        if 0 < n < minimum:
            out.append(Finding("DIE", c, f"instantiated by {_plural(n, 'individual')}; "
                                         f"at least {minimum} expected"))
        elif n == 0 and has_subs and not exempt and minimum > 0:
            out.append(Finding("DIE", c, f"instantiated by 0 individuals; at least {minimum} expected"))
    return out


def check_empty_classes(g: Graph, idx: EntityIndex, v: Vocabulary, config: Optional[dict] = None,
                        ctx: Optional[Context] = None) -> list[Finding]:
    """Classes with neither instances nor subclasses."""
    config = config or {}
    ctx = ctx or _ctx(g, idx, v)
    in_scope = _scope(v, config)
    return [Finding("DIE-EMPTY", c, "class has no instances and no subclasses")
            for c in ctx.idx.classes()
            if in_scope(c) and not ctx.tax.direct_instances(c) and not ctx.tax.subs.get(c)]


# DSE ----------------------------------------------------------------------

def check_dse(g: Graph, idx: EntityIndex, v: Vocabulary, config: Optional[dict] = None,
              ctx: Optional[Context] = None) -> list[Finding]:
    config = config or {}
    ctx = ctx or _ctx(g, idx, v)
    in_scope = _scope(v, config)
    out = []
    for c in ctx.idx.classes():
        subs = ctx.tax.subs.get(c, set())
        if in_scope(c) and len(subs) == 1:
            only = next(iter(subs))
            out.append(Finding("DSE", c, f"subclassed only by <{only.value}>"))
    return out


# ICD ----------------------------------------------------------------------

def check_icd(g: Graph, idx: EntityIndex, v: Vocabulary, config: Optional[dict] = None,
              ctx: Optional[Context] = None) -> list[Finding]:
    """Individuals that are neither categorized nor serving as a category.

    A type only counts when it points at a class inside the scope (or at
    any class with ``classScope = "any"``).  With ``includeUntyped``,
    in-scope subjects that carry no declaration at all are reported too.
    """
    config = config or {}
    ctx = ctx or _ctx(g, idx, v)
    in_scope = _scope(v, config)
    any_class = config.get("classScope", "scope") == "any"
    out = []
    for x, flags in ctx.idx.items():
        if not in_scope(x) or not flags.is_individual or flags.is_class:
            continue
        types = ctx.tax.types.get(x, set())
        if not any(any_class or in_scope(t) for t in types):
            what = "only declared a named individual" if not types else "typed only outside the scope"
            out.append(Finding("ICD", x, f"individual is not categorized ({what})"))
    if config.get("includeUntyped", True):
        declared_ontologies = set(g.subjects(v.type_prop, v.ontology_decl))
        for s in g.subject_terms():
            if (isinstance(s, IRI) and in_scope(s) and s not in ctx.idx
                    and s not in declared_ontologies and not g.objects(s, v.type_prop)):
                out.append(Finding("ICD", s, "entity has no type assertion"))
    return out


# Metamodeling -----------------------------------------------------------------

def check_metamodeling(g: Graph, idx: EntityIndex, v: Vocabulary, config: Optional[dict] = None,
                       ctx: Optional[Context] = None) -> list[Finding]:
    """Punned entities must be typed and must actually classify something."""
    config = config or {}
    ctx = ctx or _ctx(g, idx, v)
    in_scope = _scope(v, config)
    out = []
    for x in ctx.idx.punned():
        if not in_scope(x):
            continue
        problems = []
        if not ctx.tax.types.get(x):
            problems.append("has no type assertion to a class")
        if not ctx.tax.direct_instances(x) and not ctx.tax.subs.get(x):
            problems.append("has neither instances nor subclasses")
        if problems:
            out.append(Finding("METAMODELING", x, "punned entity " + " and ".join(problems)))
    return out


# KRL ----------------------------------------------------------------------

def valid_link(value: str, allowed_hosts=()) -> bool:
    """http(s) URL with a host; fragments allowed; optional host suffix filter."""
    if not value or any(c.isspace() for c in value):
        return False
    try:
        parts = urlsplit(value)
    except ValueError:
        return False
    if parts.scheme not in ("http", "https") or not parts.hostname:
        return False
    host = parts.hostname.lower()
    return not allowed_hosts or any(host == h or host.endswith("." + h) for h in allowed_hosts)


def _text(o) -> str:
    return o.value if isinstance(o, IRI) else o.lexical if isinstance(o, Literal) else ""


def _declared(g: Graph, v: Vocabulary, decls) -> set:
    out = set()
    for d in decls:
        out.update(s for s in g.subjects(v.type_prop, d) if isinstance(s, IRI))
    return out


def krl_targets(g: Graph, idx: EntityIndex, v: Vocabulary, kind: str) -> set:
    classes = _declared(g, v, (v.class_decl, IRI(RDFS + "Class")))
    if kind == "class":
        return classes
    if kind == "property":
        return _declared(g, v, (v.object_prop_decl, v.annotation_prop_decl, v.datatype_prop_decl))
    if kind == "individual":
        return {x for x in idx.individuals() if x not in classes}
    raise ValueError(f"unknown entity kind {kind!r}")


_KRL_IDS = {("class", "comment"): "KRL-CLASS-COMMENT", ("class", "link"): "KRL-CLASS-LINK",
            ("property", "comment"): "KRL-PROPERTY-COMMENT", ("property", "link"): "KRL-PROPERTY-LINK",
            ("individual", "comment"): "KRL-INDIVIDUAL-COMMENT",
            ("individual", "link"): "KRL-INDIVIDUAL-LINK"}


def check_krl(g: Graph, idx: EntityIndex, v: Vocabulary, config: Optional[dict] = None,
              ctx: Optional[Context] = None) -> list[Finding]:
    """Documentation (comment) and real-world linkage (FOAF link) per entity."""
    config = config or {}
    ctx = ctx or _ctx(g, idx, v)
    in_scope = _scope(v, config)
    kinds = config.get("kinds", ("class", "property"))
    hosts = tuple(config.get("allowedHosts", ("wikipedia.org",)))
    accept_bibtex = config.get("acceptBibTeX", True)
    out = []
    for kind in kinds:
        for x in sorted(krl_targets(g, ctx.idx, v, kind)):
            if not in_scope(x):
                continue
            if config.get("requireComment", True):
                comments = [o for o in g.objects(x, v.comment_prop)
                            if isinstance(o, Literal) and o.lexical.strip()]
                if not comments:
                    out.append(Finding(_KRL_IDS[kind, "comment"], x, f"{kind} has no non-empty comment"))
            if config.get("requireLink", True):
                linked = any(valid_link(_text(o), hosts) for p in v.link_props for o in g.objects(x, p))
                if not linked and accept_bibtex and g.objects(x, v.has_bibtex):
                    linked = True
                if not linked:
                    where = f" on {', '.join(hosts)}" if hosts else ""
                    out.append(Finding(_KRL_IDS[kind, "link"], x,
                                       f"{kind} has no FOAF link (isPrimaryTopicOf/page) "
                                       f"to an http(s) URL{where}"))
    return out


# SAR ----------------------------------------------------------------------

def check_sar(g: Graph, idx: EntityIndex, v: Vocabulary, config: Optional[dict] = None,
              ctx: Optional[Context] = None) -> list[Finding]:
    """Subject-area cardinality: between ``min`` and ``max`` hasArea links."""
    config = config or {}
    ctx = ctx or _ctx(g, idx, v)
    in_scope = _scope(v, config)
    lo, hi = int(config.get("min", 1)), int(config.get("max", 3))
    kinds = config.get("subjectKinds", ("individual",))
    areas = {t.o for t in g.with_predicate(v.has_area)}
    targets = set()
    for x, f in ctx.idx.items():
        if ("individual" in kinds and f.is_individual) or ("class" in kinds and f.is_class):
            targets.add(x)
    out = []
    for x in sorted(targets - areas):
        if not in_scope(x):
            continue
        n = len(set(g.objects(x, v.has_area)))
        if n < lo:
            out.append(Finding("SAR", x, f"associated with {_plural(n, 'subject area')}; at least {lo} expected"))
        elif n > hi:
            out.append(Finding("SAR", x, f"associated with {_plural(n, 'subject area')}; at most {hi} allowed"))
    return out


# Technological spaces -----------------------------------------------------

def space_associations(g: Graph, v: Vocabulary, space: IRI) -> set:
    out = set()
    if v.space_orientation in ("both", "object"):
        out.update(x for x in g.subjects(v.has_space, space) if isinstance(x, IRI))
    if v.space_orientation in ("both", "subject"):
        out.update(x for x in g.objects(space, v.has_space) if isinstance(x, IRI))
    out.discard(space)
    return out


def spaces(ctx: Context) -> list[IRI]:
    return sorted(ctx.tax.instances(ctx.v.technological_space_root))


def check_space_conformance(g: Graph, idx: EntityIndex, v: Vocabulary, config: Optional[dict] = None,
                            ctx: Optional[Context] = None) -> list[Finding]:
    """Each space needs two associated artifact types related by conformsTo."""
    config = config or {}
    ctx = ctx or _ctx(g, idx, v)
    in_scope = _scope(v, config)
    need_kind = config.get("requireArtifactKind", True)
    out = []
    for s in spaces(ctx):
        if not in_scope(s):
            continue
        assoc = space_associations(g, v, s)
        if need_kind:
            assoc = {a for a in assoc if ctx.tax.is_kind(a, v.artifact_root)}
        ok = any(b in assoc and b != a for a in assoc for b in g.objects(a, v.conforms_to))
        if not ok:
            out.append(Finding("SPACE-CONFORMS", s,
                               "no conformsTo relationship between two associated artifacts "
                               f"({_plural(len(assoc), 'artifact')} associated)"))
    return out


_SPACE_KINDS = (("language", "language_root", "needLanguages"),
                ("tool", "tool_root", "needTools"),
                ("artifact", "artifact_root", "needArtifacts"))


def check_space_specified(g: Graph, idx: EntityIndex, v: Vocabulary, config: Optional[dict] = None,
                          ctx: Optional[Context] = None) -> list[Finding]:
    config = config or {}
    ctx = ctx or _ctx(g, idx, v)
    in_scope = _scope(v, config)
    out = []
    for s in spaces(ctx):
        if not in_scope(s):
            continue
        assoc = space_associations(g, v, s)
        missing = []
        for kind, root, key in _SPACE_KINDS:
            need = int(config.get(key, 1))
            have = sum(1 for a in assoc if ctx.tax.is_kind(a, getattr(v, root)))
            if have < need:
                missing.append(kind)
        if missing:
            out.append(Finding("SPACE-SPECIFIED", s, "space lacks associated " + ", ".join(sorted(missing))))
    return out


# Activities and approaches ------------------------------------------------

def neighbors(g: Graph, v: Vocabulary, x: IRI, predicates=None) -> set:
    """IRIs linked to x in either direction by relating (non-structural) predicates."""
    skip = v.structural_props | v.annotation_props
    out = set()
    for t in g.about(x):
        if isinstance(t.o, IRI) and (t.p in predicates if predicates else t.p not in skip):
            out.add(t.o)
    for p in (predicates or g.predicates()):
        if predicates is None and p in skip:
            continue
        out.update(s for s in g.subjects(p, x) if isinstance(s, IRI))
    out.discard(x)
    return out


def check_activity_specified(g: Graph, idx: EntityIndex, v: Vocabulary, config: Optional[dict] = None,
                             ctx: Optional[Context] = None) -> list[Finding]:
    """SE activity types need an artifact type and a language or tool type."""
    config = config or {}
    ctx = ctx or _ctx(g, idx, v)
    in_scope = _scope(v, config)
    root = v.se_activity_root
    activities = set(ctx.tax.descendants(root)) - {root}
    if config.get("leafOnly", False):
        activities = {a for a in activities if not ctx.tax.subs.get(a)}
    out = []
    for a in sorted(activities):
        if not in_scope(a):
            continue
        near = neighbors(g, v, a)
        missing = []
        if not any(ctx.tax.is_kind(n, v.artifact_root) for n in near):
            missing.append("artifact")
        if not any(ctx.tax.is_kind(n, v.language_root) or ctx.tax.is_kind(n, v.tool_root) for n in near):
            missing.append("language or tool")
        if missing:
            out.append(Finding("ACTIVITY-SPECIFIED", a, "activity is not linked to any " + " nor ".join(missing)))
    return out


def check_approach_specified(g: Graph, idx: EntityIndex, v: Vocabulary, config: Optional[dict] = None,
                             ctx: Optional[Context] = None) -> list[Finding]:
    config = config or {}
    ctx = ctx or _ctx(g, idx, v)
    in_scope = _scope(v, config)
    props = config.get("properties")
    props = {IRI(p) for p in props} if props else {v.serves, v.uses, v.is_specified_by}
    out = []
    for a in sorted(ctx.tax.instances(v.methodological_approach_root)):
        if not in_scope(a):
            continue
        near = neighbors(g, v, a, props)
        if not any(ctx.tax.is_kind(n, v.formal_entity_root) or ctx.tax.is_kind(n, v.language_root)
                   for n in near):
            out.append(Finding("APPROACH-SPECIFIED", a,
                               "approach is not connected to a formal entity or language"))
    return out


# Disjointness ---------------------------------------------------------------

def disjoint_pairs(g: Graph, v: Vocabulary) -> set:
    pairs = set()
    for t in g.with_predicate(v.disjoint_prop):
        if isinstance(t.s, IRI) and isinstance(t.o, IRI):
            pairs.add(frozenset((t.s, t.o)))
    for node in g.subjects(v.type_prop, v.all_disjoint_classes):
        for head in g.objects(node, v.members_prop):
            members = sorted({m for m in g.list_items(head) if isinstance(m, IRI)})
            pairs.update(frozenset(p) for p in combinations(members, 2))
    return pairs


def _describe_pairs(pairs) -> str:
    return "; ".join(" / ".join(f"<{c.value}>" for c in sorted(p)) for p in
                     sorted(pairs, key=lambda p: sorted(c.value for c in p)))


def check_disjointness(g: Graph, idx: EntityIndex, v: Vocabulary, config: Optional[dict] = None,
                       ctx: Optional[Context] = None) -> list[Finding]:
    """Members (or populated subclasses) of two disjoint classes."""
    ctx = ctx or _ctx(g, idx, v)
    pairs = disjoint_pairs(g, v)
    if not pairs:
        return []
    out = []
    for x in sorted(ctx.tax.types):
        hit = [p for p in pairs if p <= ctx.tax.all_types(x)]
        if hit:
            out.append(Finding("DISJOINT", x, "instance of disjoint classes " + _describe_pairs(hit)))
    typed = set(ctx.tax.types)
    for c in ctx.idx.classes():
        if c in typed:
            continue
        hit = [p for p in pairs if p <= ctx.tax.ancestors(c)]
        if hit and ctx.tax.instances(c):
            out.append(Finding("DISJOINT", c, "populated subclass of disjoint classes " + _describe_pairs(hit)))
    return out


# Top level and modules ------------------------------------------------------

def check_toplevel(g: Graph, idx: EntityIndex, v: Vocabulary, config: Optional[dict] = None,
                   ctx: Optional[Context] = None) -> list[Finding]:
    """Too many demarcated roots: one finding per root once ``maxRoots`` is exceeded.

    A root is an in-scope class with no named superclass (owl:Thing aside)
    that is not itself typed into the hierarchy.
    """
    config = config or {}
    ctx = ctx or _ctx(g, idx, v)
    in_scope = _scope(v, config)
    limit = int(config.get("maxRoots", 10))
    thing = IRI(OWL + "Thing")
    roots = [c for c in ctx.idx.classes()
             if in_scope(c) and not (ctx.tax.supers.get(c, set()) - {thing}) and not ctx.tax.types.get(c)]
    if len(roots) <= limit:
        return []
    return [Finding("TLR", c, f"one of {len(roots)} top-level roots; at most {limit} expected")
            for c in roots]


def _tbox_module(ig, config: dict):
    chosen = config.get("tboxModule")
    if chosen:
        return IRI(chosen)
    for iri, mod in sorted(ig.nodes.items()):
        stem = re.split(r"[/#]", iri.value.rstrip("/#"))[-1].lower()
        if stem in ("tbox", "tbox.ttl") or stem.endswith("tbox"):
            return iri
    return None


def check_tbox_centralization(import_graph, v: Vocabulary, config: Optional[dict] = None) -> list[Finding]:
    """Class declarations outside the tbox module."""
    config = config or {}
    if import_graph is None or len(import_graph.nodes) < 2:
        return []
    tbox = _tbox_module(import_graph, config)
    if tbox is None:
        return []
    seen: dict[IRI, list] = {}
    for iri, mod in sorted(import_graph.nodes.items()):
        if iri == tbox:
            continue
        for s in mod.graph.subjects(v.type_prop, v.class_decl):
            if isinstance(s, IRI):
                seen.setdefault(s, []).append(iri)
    return [Finding("TBOX-CENTRAL", c, "class declared outside the tbox module in "
                    + ", ".join(f"<{m.value}>" for m in mods), module=mods[0])
            for c, mods in sorted(seen.items())]


# -- registry -------------------------------------------------------------------

def _wrap(fn, **fixed):
    def check(ctx: Context, config: dict):
        return fn(ctx.g, ctx.idx, ctx.v, {**fixed, **config}, ctx=ctx)
    return check


def _central(ctx: Context, config: dict):
    return check_tbox_centralization(ctx.import_graph, ctx.v, config)


_DEFAULTS = [
    ("ICD", "warning", "individuals must be categorized or serve as a category", _wrap(check_icd)),
    ("DIE", "warning", "classes must be instantiated by at least two individuals", _wrap(check_die)),
    ("DIE-EMPTY", "info", "classes without instances and subclasses", _wrap(check_empty_classes)),
    ("DSE", "warning", "classes must not be subclassed by only one class", _wrap(check_dse)),
    ("METAMODELING", "error", "punned entities must follow the metamodeling schema", _wrap(check_metamodeling)),
    ("KRL-CLASS-COMMENT", "error", "class declarations must have a comment",
     _wrap(check_krl, kinds=("class",), requireLink=False)),
    ("KRL-PROPERTY-COMMENT", "error", "property declarations must have a comment",
     _wrap(check_krl, kinds=("property",), requireLink=False)),
    ("KRL-CLASS-LINK", "error", "class declarations must have a FOAF link",
     _wrap(check_krl, kinds=("class",), requireComment=False)),
    ("KRL-PROPERTY-LINK", "error", "property declarations must have a FOAF link",
     _wrap(check_krl, kinds=("property",), requireComment=False)),
    ("KRL-INDIVIDUAL-LINK", "error", "individuals must be linked to a knowledge resource",
     _wrap(check_krl, kinds=("individual",), requireComment=False)),
    ("SAR", "warning", "entities must have between 1 and 3 subject areas", _wrap(check_sar)),
    ("SPACE-CONFORMS", "warning", "technological spaces must have a conformance relationship",
     _wrap(check_space_conformance)),
    ("SPACE-SPECIFIED", "warning", "technological spaces must be specified by languages, tools, artifacts",
     _wrap(check_space_specified)),
    ("ACTIVITY-SPECIFIED", "warning", "SE activities must be specified by artifacts and languages or tools",
     _wrap(check_activity_specified)),
    ("APPROACH-SPECIFIED", "warning", "methodological approaches must be served by a formal entity or language",
     _wrap(check_approach_specified)),
    ("DISJOINT", "error", "no entity may fall into two disjoint classes", _wrap(check_disjointness)),
    ("TLR", "warning", "a manageable number of top-level roots", _wrap(check_toplevel)),
    ("TBOX-CENTRAL", "error", "classes are declared in the tbox module only", _central),
]

RULE_IDS = tuple(r[0] for r in _DEFAULTS)


def default_registry(overrides: Optional[dict] = None) -> list[Rule]:
    """All rules with default severities; ``overrides`` maps rule id to config."""
    overrides = overrides or {}
    unknown = set(overrides) - set(RULE_IDS)
    if unknown:
        raise ValueError(f"unknown rule id(s) in configuration: {', '.join(sorted(unknown))}")
    rules = []
    for rid, severity, description, check in _DEFAULTS:
        cfg = dict(overrides.get(rid, {}))
        severity = cfg.pop("severity", severity)
        severity_rank(severity)
        rules.append(Rule(rid, severity, description, check, cfg))
    return rules


# -- engine ---------------------------------------------------------------------

@dataclass(frozen=True)
class ValidationReport:
    findings: tuple
    counts: dict
    stale_exceptions: tuple
    verdict: str
    threshold: str
    warnings: tuple = ()

    @property
    def suppressed(self) -> int:
        return sum(1 for f in self.findings if f.suppressed)

    def by_rule(self, rule_id: str, include_suppressed: bool = False) -> list[Finding]:
        return [f for f in self.findings if f.rule_id == rule_id and (include_suppressed or not f.suppressed)]

    def to_dict(self) -> dict:
        return {
            "verdict": self.verdict,
            "threshold": self.threshold,
            "counts": {s: self.counts.get(s, 0) for s in SEVERITIES},
            "suppressed": self.suppressed,
            "staleExceptions": [{"ruleId": e.rule_id, "focus": e.focus.value, "reason": e.reason}
                                for e in self.stale_exceptions],
            "findings": [f.to_dict() for f in self.findings],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ValidationReport":
        return cls(tuple(Finding.from_dict(f) for f in d.get("findings", [])),
                   dict(d.get("counts", {})),
                   tuple(ExceptionEntry(e["ruleId"], IRI(e["focus"]), e.get("reason", ""))
                         for e in d.get("staleExceptions", [])),
                   d.get("verdict", "pass"), d.get("threshold", "error"))


def run_rules(g: Graph, idx: EntityIndex, v: Vocabulary, registry: list[Rule],
              exceptions: Optional[ExceptionList] = None, threshold: str = "error",
              import_graph=None) -> ValidationReport:
    """Evaluate every rule; exceptions suppress (but keep) matching findings."""
    ids = [r.id for r in registry]
    if len(set(ids)) != len(ids):
        raise ValueError("duplicate rule ids in registry")
    limit = severity_rank(threshold)
    exceptions = exceptions or ExceptionList()
    ctx = Context(g, idx, v, import_graph)
    warnings = [f"exception for unknown rule {e.rule_id!r} (focus <{e.focus.value}>)"
                for e in exceptions if e.rule_id not in ids]
    collected: dict[tuple, Finding] = {}
    for rule in registry:
        for f in rule.run(ctx):
            if f.module is None:
                docs = sorted(ctx.idx.get_flags(f.focus).declaring_documents)
                module = next((d for d in docs if re.match(r"[A-Za-z][A-Za-z0-9+.\-]*:", d)), None)
                if module:
                    f = replace(f, module=IRI(module))
            collected.setdefault((f.rule_id, f.focus), f)
    matched = set()
    findings = []
    for key, f in collected.items():
        if exceptions.get(*key) is not None:
            matched.add(key)
            f = replace(f, suppressed=True)
        findings.append(f)
    findings.sort(key=Finding.sort_key)
    counts = {s: 0 for s in SEVERITIES}
    for f in findings:
        if not f.suppressed:
            counts[f.severity] += 1
    stale = tuple(e for e in exceptions if (e.rule_id, e.focus) not in matched)
    failed = any(not f.suppressed and severity_rank(f.severity) >= limit for f in findings)
    return ValidationReport(tuple(findings), counts, stale, "fail" if failed else "pass",
                            threshold, tuple(warnings))


# -- rendering -------------------------------------------------------------------

FINDING_COLUMNS = ("ruleId", "focus", "message", "severity", "module", "suppressed")


def render_report(report: ValidationReport, fmt: str = "text") -> str:
    if fmt == "json":
        return json.dumps(report.to_dict(), indent=2, ensure_ascii=False) + "\n"
    if fmt == "csv":
        rows = []
        for f in report.findings:
            d = f.to_dict()
            rows.append([d["ruleId"], d["focus"], d["message"], d["severity"], d["module"] or "",
                         "true" if d["suppressed"] else "false"])
        return csv_text(FINDING_COLUMNS, rows)
    if fmt != "text":
        raise ValueError(f"unknown format {fmt!r}")
    lines = []
    for f in report.findings:
        mark = " (suppressed)" if f.suppressed else ""
        lines.append(f"{f.severity.upper():7} {f.rule_id:20} <{f.focus.value}>: {f.message}{mark}")
    for e in report.stale_exceptions:
        lines.append(f"STALE   {e.rule_id:20} <{e.focus.value}>: exception never matched")
    c = report.counts
    lines.append(f"{report.verdict.upper()}: {c.get('error', 0)} error(s), {c.get('warning', 0)} warning(s), "
                 f"{c.get('info', 0)} info, {report.suppressed} suppressed, "
                 f"{len(report.stale_exceptions)} stale exception(s)")
    return "\n".join(lines) + "\n"

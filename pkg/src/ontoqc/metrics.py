"""Query-based reports: deterministic count tables over a (merged) graph."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from typing import Optional, Union

from .graph import Graph
from .index import EntityIndex, Taxonomy
from .terms import IRI, OWL, RDF, RDFS, local_name
from .tabular import csv_text
from .vocab import Vocabulary

Cell = Union[str, int]

TABLE_NAMES = ("entities", "properties", "spaces", "concepts", "activities", "constraints")
METRIC_COLUMNS = ("Metric", "Count")


@dataclass(frozen=True)
class MetricsTable:
    name: str
    columns: tuple
    rows: tuple

    def __post_init__(self):
        width = len(self.columns)
        for r in self.rows:
            if len(r) != width:
                raise ValueError(f"{self.name}: row {r!r} has {len(r)} cells, expected {width}")
            for c in r:
                if isinstance(c, bool) or not isinstance(c, (str, int)) or (isinstance(c, int) and c < 0):
                    raise ValueError(f"{self.name}: bad cell {c!r}")

    def as_dict(self) -> dict:
        """First column to remaining cells (a scalar for two-column tables)."""
        return {r[0]: (r[1] if len(r) == 2 else tuple(r[1:])) for r in self.rows}

    def __getitem__(self, key):
        return self.as_dict()[key]


def _metric_table(name: str, pairs) -> MetricsTable:
    return MetricsTable(name, METRIC_COLUMNS, tuple((k, int(n)) for k, n in pairs))


def short_name(iri: IRI, prefixes) -> str:
    """Strip the longest declared prefix namespace; fall back to the local name."""
    best = ""
    for ns in prefixes.values():
        if ns and iri.value.startswith(ns) and len(ns) > len(best) and len(ns) < len(iri.value):
            best = ns
    return iri.value[len(best):] if best else local_name(iri)


def usage_triples(g: Graph, v: Vocabulary, exclude=()):
    """Assertions that 'exercise' entities: not taxonomy, declarations or annotations."""
    skip = v.structural_props | v.annotation_props | {IRI(x) for x in exclude}
    for t in g:
        if t.p not in skip and isinstance(t.s, IRI):
            yield t


def _involving(g: Graph, v: Vocabulary, members: set, exclude=()):
    """(member, other end, predicate) for each usage triple touching ``members``."""
    out = []
    for t in usage_triples(g, v, exclude):
        if t.s in members:
            out.append((t.s, t.o, t.p))
        if t.o in members:
            out.append((t.o, t.s, t.p))
    return out


# -- tables -----------------------------------------------------------------------

def report_entity_types(g: Graph, idx: Optional[EntityIndex], v: Vocabulary,
                        tax: Optional[Taxonomy] = None) -> MetricsTable:
    """One row per configured root: entities = instances + subclasses (root excluded)."""
    tax = tax or Taxonomy(g, v)
    rows = []
    for field_name in v.toplevel_roots:
        root = v.root(field_name)
        inst = len(tax.instances(root))
        subs = len(tax.descendants(root) - {root})
        rows.append((short_name(root, g.prefixes), inst + subs, inst, subs))
    rows.sort(key=lambda r: r[0])
    return MetricsTable("entities", ("Entity type", "Number of entities", "Number of instances",
                                     "Number of subclasses"), tuple(rows))


_PROPERTY_TYPES = (("O", "object_prop_decl"), ("A", "annotation_prop_decl"), ("D", "datatype_prop_decl"))


def report_properties(g: Graph, idx: Optional[EntityIndex], v: Vocabulary) -> MetricsTable:
    """Declared properties with assertion counts, kind, domain, range and inverse."""
    rows = []
    declared: dict[IRI, str] = {}
    for code, decl in _PROPERTY_TYPES:
        for s in g.subjects(v.type_prop, getattr(v, decl)):
            if isinstance(s, IRI):
                declared.setdefault(s, code)
    names = lambda xs: " ".join(sorted({short_name(x, g.prefixes) for x in xs if isinstance(x, IRI)}))
    for p, code in declared.items():
        inverse = set(g.objects(p, v.inverse_prop)) | set(g.subjects(v.inverse_prop, p))
        inverse.discard(p)
        rows.append((short_name(p, g.prefixes), len(g.with_predicate(p)), code,
                     names(g.objects(p, v.domain_prop)), names(g.objects(p, v.range_prop)), names(inverse)))
    rows.sort(key=lambda r: (-r[1], r[0]))
    return MetricsTable("properties", ("Property", "Assertions", "Type", "Domain", "Range", "Inverse"),
                        tuple(rows))


def space_pairs(g: Graph, v: Vocabulary) -> set:
    """(space, associated entity) pairs in the configured hasSpace orientation."""
    pairs = set()
    for t in g.with_predicate(v.has_space):
        if not (isinstance(t.s, IRI) and isinstance(t.o, IRI)) or t.s == t.o:
            continue
        if v.space_orientation in ("both", "object"):
            pairs.add((t.o, t.s))
        if v.space_orientation in ("both", "subject"):
            pairs.add((t.s, t.o))
    return pairs


def report_spaces(g: Graph, idx: Optional[EntityIndex], v: Vocabulary,
                  tax: Optional[Taxonomy] = None) -> MetricsTable:
    tax = tax or Taxonomy(g, v)
    root = v.technological_space_root
    spaces = tax.instances(root)
    pairs = {(s, x) for s, x in space_pairs(g, v) if s in spaces}
    metrics = [("instances", len(spaces)), ("subclasses", len(tax.descendants(root) - {root}))]
    kinds = (("languages", v.language_root), ("tools", v.tool_root), ("artifacts", v.artifact_root))
    for label, kroot in kinds:
        metrics.append((f"spaces_with_{label}", len({s for s, x in pairs if tax.is_kind(x, kroot)})))
    for label, kroot in kinds:
        metrics.append((f"{label}_with_spaces", len({x for s, x in pairs if tax.is_kind(x, kroot)})))
    return _metric_table("spaces", metrics)


def report_concepts(g: Graph, idx: Optional[EntityIndex], v: Vocabulary,
                    tax: Optional[Taxonomy] = None, exclude=()) -> MetricsTable:
    """Language-concept coverage; 'used' means touched by a usage assertion."""
    tax = tax or Taxonomy(g, v)
    root = v.language_concept_root
    instances = tax.instances(root)
    subclasses = set(tax.descendants(root)) - {root}
    concepts = instances | subclasses
    touching = _involving(g, v, concepts, exclude)
    used = {c for c, _, _ in touching}
    languages = {o for _, o, _ in touching
                 if isinstance(o, IRI) and o not in concepts and o in tax.instances(v.language_root)}
    programming = {x for x in languages if v.programming_language_class in tax.all_types(x)}
    return _metric_table("concepts", [
        ("concepts", len(concepts)),
        ("instances", len(instances)),
        ("subclasses", len(subclasses)),
        ("used_instances", len(used & instances)),
        ("used_subclasses", len(used & subclasses)),
        ("properties", len({p for _, _, p in touching})),
        ("software_languages", len(languages)),
        ("programming_languages", len(programming)),
    ])


def report_activities(g: Graph, idx: Optional[EntityIndex], v: Vocabulary,
                      tax: Optional[Taxonomy] = None, exclude=()) -> MetricsTable:
    """SE-activity coverage; language/tool metrics split into instance and type level."""
    tax = tax or Taxonomy(g, v)
    root = v.se_activity_root
    immediate = set(tax.subs.get(root, ())) - {root}
    subclasses = set(tax.descendants(root)) - {root}
    nonimmediate = subclasses - immediate
    instances = tax.instances(root)
    activities = subclasses | instances
    touching = _involving(g, v, activities, exclude)
    used = {a for a, _, _ in touching}
    linked = {o for _, o, _ in touching if isinstance(o, IRI) and o not in activities}

    def split(kroot):
        inst = {x for x in linked if x in tax.instances(kroot)}
        subs = {x for x in linked if x in tax.descendants(kroot)}
        return len(inst), len(subs)

    lang_i, lang_s = split(v.language_root)
    tool_i, tool_s = split(v.tool_root)
    return _metric_table("activities", [
        ("instances", len(instances)),
        ("immediate_subclasses", len(immediate)),
        ("nonimmediate_subclasses", len(nonimmediate)),
        ("used_nonimmediate_subclasses", len(used & nonimmediate)),
        ("properties", len({p for _, _, p in touching})),
        ("language_instances", lang_i),
        ("language_subclasses", lang_s),
        ("tools_instances", tool_i),
        ("tools_subclasses", tool_s),
        ("artifacts", len({x for x in linked if x in tax.descendants(v.artifact_root)})),
    ])


# Predicate-style constructs count triples using them; type-style constructs
# count rdf:type assertions naming them.
CONSTRAINT_PREDICATES = tuple(IRI(ns + n) for ns, n in (
    (OWL, "disjointWith"), (OWL, "inverseOf"), (RDFS, "domain"), (RDFS, "range"),
    (OWL, "equivalentClass"), (OWL, "propertyDisjointWith"), (OWL, "propertyChainAxiom"),
    (OWL, "cardinality"), (OWL, "minCardinality"), (OWL, "maxCardinality"),
    (OWL, "qualifiedCardinality"), (OWL, "minQualifiedCardinality"), (OWL, "maxQualifiedCardinality"),
    (OWL, "someValuesFrom"), (OWL, "allValuesFrom"), (OWL, "hasValue"), (OWL, "disjointUnionOf"),
))
CONSTRAINT_TYPES = tuple(IRI(OWL + n) for n in (
    "AllDisjointClasses", "FunctionalProperty", "InverseFunctionalProperty", "TransitiveProperty",
    "SymmetricProperty", "AsymmetricProperty", "ReflexiveProperty", "IrreflexiveProperty",
))


def _curie(iri: IRI) -> str:
    for prefix, ns in (("owl", OWL), ("rdfs", RDFS), ("rdf", RDF)):
        if iri.value.startswith(ns):
            return f"{prefix}:{iri.value[len(ns):]}"
    return iri.value


def report_constraints(g: Graph, v: Vocabulary) -> MetricsTable:
    rows = [(_curie(p), len(g.with_predicate(p))) for p in CONSTRAINT_PREDICATES]
    rows += [(_curie(c), len(g.subjects(v.type_prop, c))) for c in CONSTRAINT_TYPES]
    rows.sort(key=lambda r: r[0])
    return MetricsTable("constraints", ("Property", "Uses"), tuple(rows))


def build_table(name: str, g: Graph, idx: Optional[EntityIndex], v: Vocabulary) -> MetricsTable:
    if name == "entities":
        return report_entity_types(g, idx, v)
    if name == "properties":
        return report_properties(g, idx, v)
    if name == "spaces":
        return report_spaces(g, idx, v)
    if name == "concepts":
        return report_concepts(g, idx, v)
    if name == "activities":
        return report_activities(g, idx, v)
    if name == "constraints":
        return report_constraints(g, v)
    raise ValueError(f"unknown table {name!r}; expected one of {', '.join(TABLE_NAMES)}")


# -- serialization ------------------------------------------------------------------

def serialize_table(t: MetricsTable, fmt: str = "csv") -> bytes:
    if fmt == "csv":
        return csv_text(t.columns, t.rows).encode("utf-8")
    if fmt == "json":
        doc = {"name": t.name, "columns": list(t.columns), "rows": [list(r) for r in t.rows]}
        return (json.dumps(doc, indent=2, ensure_ascii=False) + "\n").encode("utf-8")
    if fmt == "text":
        cells = [list(map(str, t.columns))] + [[str(c) for c in r] for r in t.rows]
        widths = [max(len(row[i]) for row in cells) for i in range(len(t.columns))]
        lines = ["  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip() for row in cells]
        lines.insert(1, "  ".join("-" * w for w in widths))
        return ("\n".join(lines) + "\n").encode("utf-8")
    raise ValueError(f"unknown format {fmt!r}")


def table_from_csv(name: str, data: Union[bytes, str]) -> MetricsTable:
    """Inverse of CSV serialization; all-digit cells become integers."""
    text = data.decode("utf-8") if isinstance(data, bytes) else data
    rows = list(csv.reader(io.StringIO(text)))
    header, body = rows[0], rows[1:]
    conv = lambda c: int(c) if c.isdigit() and c.isascii() else c
    return MetricsTable(name, tuple(header), tuple(tuple(conv(c) for c in r) for r in body))

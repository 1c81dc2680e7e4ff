"""Property and class IRIs that rules and reports refer to.

Everything is overridable from a TOML file::

    [prefixes]
    tbox = "https://example.org/tbox#"

    [vocabulary]
    hasArea = "tbox:hasSubjectArea"        # camelCase or snake_case keys
    scopeNamespaces = ["https://example.org/"]

    [rules.DIE]
    minInstances = 3
    severity = "error"

Values are absolute IRIs or CURIEs over ``[prefixes]``.  An empty string
unsets an optional entry (the issue vocabulary, for instance).
"""

from __future__ import annotations

import re
import sys
from dataclasses import dataclass, field, fields, replace
from typing import Any, Optional

from .terms import FOAF, IRI, OWL, RDF, RDFS, SKOS, XSD

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

DEFAULT_NS = "https://softlang.org/fsl/tbox#"
DEFAULT_ISSUES_NS = "https://softlang.org/fsl/issues#"

STANDARD_NAMESPACES = (
    RDF, RDFS, OWL, XSD, FOAF, SKOS,
    "http://purl.org/dc/elements/1.1/",
    "http://purl.org/dc/terms/",
    "http://www.w3.org/ns/prov#",
    "http://www.w3.org/ns/shacl#",
    "http://purl.org/vocab/vann/",
    "http://rdfs.org/ns/void#",
    "http://schema.org/",
    "https://schema.org/",
)


class VocabularyError(ValueError):
    pass


def _t(local: str) -> IRI:
    return IRI(DEFAULT_NS + local)


# Role fields hold IRIs; the alias check only looks at these.
_IRI_ROLES = (
    "type_prop", "subclass_prop", "comment_prop", "label_prop", "class_decl",
    "named_individual_decl", "object_prop_decl", "annotation_prop_decl",
    "datatype_prop_decl", "ontology_decl", "imports_prop", "disjoint_prop",
    "all_disjoint_classes", "members_prop", "inverse_prop", "domain_prop", "range_prop",
    "equivalent_class_prop", "foaf_primary_topic_of", "foaf_page", "has_area",
    "has_space", "conforms_to", "element_of", "defined_by", "transforms",
    "processed_by", "uses", "has_part", "extends", "is_specified_by", "serves",
    "has_bibtex", "language_root", "tool_root", "artifact_root", "formal_entity_root",
    "conceptual_entity_root", "technological_space_root", "se_activity_root",
    "methodological_approach_root", "language_concept_root", "programming_language_class",
    "issue_class", "issue_target", "issue_critique", "issue_suggestion",
    "issue_resolve_after", "issue_status",
)


@dataclass(frozen=True)
class Vocabulary:
    type_prop: IRI = IRI(RDF + "type")
    subclass_prop: IRI = IRI(RDFS + "subClassOf")
    comment_prop: IRI = IRI(RDFS + "comment")
    label_prop: IRI = IRI(RDFS + "label")
    class_decl: IRI = IRI(OWL + "Class")
    named_individual_decl: IRI = IRI(OWL + "NamedIndividual")
    object_prop_decl: IRI = IRI(OWL + "ObjectProperty")
    annotation_prop_decl: IRI = IRI(OWL + "AnnotationProperty")
    datatype_prop_decl: IRI = IRI(OWL + "DatatypeProperty")
    ontology_decl: IRI = IRI(OWL + "Ontology")
    imports_prop: IRI = IRI(OWL + "imports")
    disjoint_prop: IRI = IRI(OWL + "disjointWith")
    all_disjoint_classes: IRI = IRI(OWL + "AllDisjointClasses")
    members_prop: IRI = IRI(OWL + "members")
    inverse_prop: IRI = IRI(OWL + "inverseOf")
    domain_prop: IRI = IRI(RDFS + "domain")
    range_prop: IRI = IRI(RDFS + "range")
    equivalent_class_prop: IRI = IRI(OWL + "equivalentClass")
    foaf_primary_topic_of: IRI = IRI(FOAF + "isPrimaryTopicOf")
    foaf_page: IRI = IRI(FOAF + "page")
    has_area: IRI = _t("hasArea")
    has_space: IRI = _t("hasSpace")
    conforms_to: IRI = _t("conformsTo")
    element_of: IRI = _t("elementOf")
    defined_by: IRI = _t("definedBy")
    transforms: IRI = _t("transforms")
    processed_by: IRI = _t("processedBy")
    uses: IRI = _t("uses")
    has_part: IRI = _t("hasPart")
    extends: IRI = _t("extends")
    is_specified_by: IRI = _t("isSpecifiedBy")
    serves: IRI = _t("serves")
    has_bibtex: IRI = _t("hasBibTeX")
    language_root: IRI = _t("Language")
    tool_root: IRI = _t("Tool")
    artifact_root: IRI = _t("Artifact")
    formal_entity_root: IRI = _t("FormalEntity")
    conceptual_entity_root: IRI = _t("ConceptualEntity")
    technological_space_root: IRI = _t("TechnologicalSpace")
    se_activity_root: IRI = _t("SEActivity")
    methodological_approach_root: IRI = _t("MethodologicalApproach")
    language_concept_root: IRI = _t("LanguageConcept")
    programming_language_class: IRI = _t("ProgrammingLanguage")
    issue_class: Optional[IRI] = _t("Issue")
    issue_target: Optional[IRI] = _t("target")
    issue_critique: Optional[IRI] = _t("critique")
    issue_suggestion: Optional[IRI] = _t("suggestion")
    issue_resolve_after: Optional[IRI] = _t("resolveAfter")
    issue_status: Optional[IRI] = _t("status")
    issues_namespace: str = DEFAULT_ISSUES_NS
    # "both", "subject" (space hasSpace x) or "object" (x hasSpace space)
    space_orientation: str = "both"
    scope_namespaces: tuple = ()
    excluded_namespaces: tuple = STANDARD_NAMESPACES
    toplevel_roots: tuple = ("language_root", "tool_root", "artifact_root",
                             "formal_entity_root", "conceptual_entity_root", "se_activity_root")
    extra_annotation_props: tuple = ()
    aliases: tuple = ()

    def __post_init__(self):
        if self.space_orientation not in ("both", "subject", "object"):
            raise VocabularyError(f"space_orientation must be both|subject|object, "
                                  f"got {self.space_orientation!r}")
        allowed = {frozenset(pair) for pair in self.aliases}
        seen: dict[IRI, str] = {}
        for name in _IRI_ROLES:
            value = getattr(self, name)
            if value is None:
                continue
            if not isinstance(value, IRI):
                raise VocabularyError(f"{name} must be an IRI, got {value!r}")
            other = seen.get(value)
            if other is not None and frozenset((other, name)) not in allowed:
                raise VocabularyError(f"{other} and {name} both map to <{value}>")
            seen[value] = name

    # -- derived sets -----------------------------------------------------

    @property
    def link_props(self) -> tuple:
        return (self.foaf_primary_topic_of, self.foaf_page)

    @property
    def annotation_props(self) -> frozenset:
        """Predicates that document an entity rather than relate it."""
        return frozenset((self.comment_prop, self.label_prop, self.foaf_primary_topic_of,
                          self.foaf_page, self.has_bibtex, IRI(RDFS + "seeAlso"),
                          IRI(OWL + "sameAs"))) | {IRI(x) for x in self.extra_annotation_props}

    @property
    def structural_props(self) -> frozenset:
        """Taxonomy and schema predicates excluded from 'usage'."""
        return frozenset((self.type_prop, self.subclass_prop, self.imports_prop,
                          self.disjoint_prop, self.inverse_prop, self.domain_prop,
                          self.range_prop, self.equivalent_class_prop, self.members_prop,
                          IRI(RDFS + "subPropertyOf"), IRI(RDF + "first"), IRI(RDF + "rest")))

    def in_scope(self, iri) -> bool:
        if not isinstance(iri, IRI):
            return False
        if self.scope_namespaces:
            return any(iri.value.startswith(ns) for ns in self.scope_namespaces)
        return not any(iri.value.startswith(ns) for ns in self.excluded_namespaces)

    def root(self, name: str) -> IRI:
        return getattr(self, name)


def _snake(key: str) -> str:
    key = key.replace("BibTeX", "Bibtex").replace("SEActivity", "SeActivity")
    return re.sub(r"(?<!^)(?=[A-Z])", "_", key).lower()


_FIELD_NAMES = {f.name for f in fields(Vocabulary)}
_CAMEL_EXTRAS = {"typeProp": "type_prop", "foafPrimaryTopicOf": "foaf_primary_topic_of",
                 "hasBibTeX": "has_bibtex", "seActivityRoot": "se_activity_root",
                 "namedIndividualDecl": "named_individual_decl"}


def _field_for(key: str) -> str:
    if key in _FIELD_NAMES:
        return key
    name = _CAMEL_EXTRAS.get(key) or _snake(key)
    if name not in _FIELD_NAMES:
        raise VocabularyError(f"unknown vocabulary key {key!r}")
    return name


def _expand(value: str, prefixes: dict) -> Optional[IRI]:
    if value == "":
        return None
    if ":" in value:
        head, tail = value.split(":", 1)
        if head in prefixes:
            return IRI(prefixes[head] + tail)
    try:
        return IRI(value)
    except ValueError:
        raise VocabularyError(f"not an IRI or known CURIE: {value!r}") from None


@dataclass
class Settings:
    """Vocabulary plus per-rule configuration, as loaded from one file."""

    vocabulary: Vocabulary = field(default_factory=Vocabulary)
    rules: dict = field(default_factory=dict)


def settings_from_mapping(data: dict[str, Any]) -> Settings:
    prefixes = {"rdf": RDF, "rdfs": RDFS, "owl": OWL, "xsd": XSD, "foaf": FOAF, "skos": SKOS,
                "tbox": DEFAULT_NS}
    prefixes.update(data.get("prefixes", {}))
    updates: dict[str, Any] = {}
    for key, value in data.get("vocabulary", {}).items():
        name = _field_for(key)
        if name in _IRI_ROLES:
            if not isinstance(value, str):
                raise VocabularyError(f"{key} must be a string")
            updates[name] = _expand(value, prefixes)
        elif name in ("scope_namespaces", "excluded_namespaces", "toplevel_roots", "aliases"):
            if not isinstance(value, list):
                raise VocabularyError(f"{key} must be a list")
            if name == "aliases":
                updates[name] = tuple(tuple(_field_for(x) for x in pair) for pair in value)
            elif name == "toplevel_roots":
                updates[name] = tuple(_field_for(x) for x in value)
            else:
                updates[name] = tuple(str(prefixes.get(x.rstrip(":"), x)) if x.endswith(":") else x
                                      for x in value)
        elif name == "extra_annotation_props":
            updates[name] = tuple(_expand(x, prefixes).value for x in value)
        else:
            updates[name] = value
    for key in data:
        if key not in ("prefixes", "vocabulary", "rules"):
            raise VocabularyError(f"unknown section [{key}]")
    vocab = replace(Vocabulary(), **updates)
    rules = {rid: dict(cfg) for rid, cfg in data.get("rules", {}).items()}
    return Settings(vocab, rules)


def load_settings(path) -> Settings:
    with open(path, "rb") as fh:
        try:
            data = tomllib.load(fh)
        except tomllib.TOMLDecodeError as e:
            raise VocabularyError(f"{path}: {e}") from None
    return settings_from_mapping(data)

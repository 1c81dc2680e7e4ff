"""RDF terms: IRIs, blank nodes, literals and triples."""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import NamedTuple, Optional, Union

RDF = "http://www.w3.org/1999/02/22-rdf-syntax-ns#"
RDFS = "http://www.w3.org/2000/01/rdf-schema#"
OWL = "http://www.w3.org/2002/07/owl#"
XSD = "http://www.w3.org/2001/XMLSchema#"
FOAF = "http://xmlns.com/foaf/0.1/"
SKOS = "http://www.w3.org/2004/02/skos/core#"

_SCHEME = re.compile(r"[A-Za-z][A-Za-z0-9+.\-]*:")


@dataclass(frozen=True, slots=True, order=True)
class IRI:
    value: str

    def __post_init__(self):
        if not _SCHEME.match(self.value):
            raise ValueError(f"not an absolute IRI: {self.value!r}")

    def __str__(self) -> str:
        return self.value

    def startswith(self, prefix: str) -> bool:
        return self.value.startswith(prefix)


@dataclass(frozen=True, slots=True, order=True)
class BNode:
    label: str

    def __str__(self) -> str:
        return f"_:{self.label}"


@dataclass(frozen=True, slots=True)
class Literal:
    lexical: str
    datatype: IRI = IRI(XSD + "string")
    lang: Optional[str] = None

    def __post_init__(self):
        if self.lang is not None and self.datatype != LANG_STRING:
            raise ValueError("language tag requires rdf:langString datatype")
        if self.lang is not None and self.lang != self.lang.lower():
            # tags compare case-insensitively; keep one canonical spelling
            object.__setattr__(self, "lang", self.lang.lower())

    def __str__(self) -> str:
        return self.lexical


LANG_STRING = IRI(RDF + "langString")
XSD_STRING = IRI(XSD + "string")

Subject = Union[IRI, BNode]
Term = Union[IRI, BNode, Literal]


class Triple(NamedTuple):
    s: Subject
    p: IRI
    o: Term


def lang_literal(text: str, lang: str) -> Literal:
    return Literal(text, LANG_STRING, lang.lower())


def term_key(t: Term) -> tuple:
    """Total order over terms: IRIs, then blank nodes, then literals (codepoint order)."""
    if isinstance(t, IRI):
        return (0, t.value, "", "")
    if isinstance(t, BNode):
        return (1, t.label, "", "")
    return (2, t.lexical, t.datatype.value, t.lang or "")


def triple_key(t: Triple) -> tuple:
    return (term_key(t.s), t.p.value, term_key(t.o))


def local_name(iri: IRI | str) -> str:
    v = iri.value if isinstance(iri, IRI) else iri
    cut = max(v.rfind("#"), v.rfind("/"))
    return v[cut + 1:] if cut >= 0 and cut < len(v) - 1 else v


def namespace_of(iri: IRI | str) -> str:
    v = iri.value if isinstance(iri, IRI) else iri
    cut = max(v.rfind("#"), v.rfind("/"))
    return v[: cut + 1] if cut >= 0 else v

"""Immutable triple graph with subject/predicate/object indexes."""

from __future__ import annotations

from types import MappingProxyType
from typing import Iterable, Iterator, Mapping, Optional, Sequence

from .terms import RDF, BNode, IRI, Term, Triple


class Graph:
    """A set of triples plus the prefix map it was written with.

    Triples keep first-seen (document) order for iteration; membership and
    equality use set semantics.  ``provenance`` maps each triple to the ids
    of the documents that contributed it (only populated by :func:`merge`
    or when ``source`` is given).
    """

    __slots__ = ("_triples", "_set", "prefixes", "base", "source", "warnings",
                 "_provenance", "_spo", "_pos", "_by_p")

    def __init__(self, triples: Iterable[Triple] = (), prefixes: Optional[Mapping[str, str]] = None,
                 base: Optional[IRI] = None, *, source: Optional[str] = None,
                 warnings: Sequence[str] = (), provenance: Optional[Mapping[Triple, tuple]] = None):
        seen: dict[Triple, None] = {}
        for t in triples:
            if not isinstance(t.p, IRI):
                raise TypeError(f"predicate must be an IRI: {t.p!r}")
            seen.setdefault(Triple(*t), None)
        self._triples = tuple(seen)
        self._set = frozenset(self._triples)
        self.prefixes = MappingProxyType(dict(prefixes or {}))
        self.base = base
        self.source = source
        self.warnings = tuple(warnings)
        if provenance is None and source is not None:
            provenance = {t: (source,) for t in self._triples}
        self._provenance = MappingProxyType(dict(provenance or {}))
        spo: dict = {}
        pos: dict = {}
        by_p: dict = {}
        for t in self._triples:
            spo.setdefault(t.s, {}).setdefault(t.p, []).append(t.o)
            pos.setdefault(t.p, {}).setdefault(t.o, []).append(t.s)
            by_p.setdefault(t.p, []).append(t)
        self._spo = spo
        self._pos = pos
        self._by_p = by_p

    def __setattr__(self, name, value):
        if hasattr(self, "_by_p"):
            raise AttributeError("Graph is immutable")
        object.__setattr__(self, name, value)

    def __len__(self) -> int:
        return len(self._triples)

    def __iter__(self) -> Iterator[Triple]:
        return iter(self._triples)

    def __contains__(self, t) -> bool:
        return t in self._set

    def __eq__(self, other) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return (self._set == other._set and dict(self.prefixes) == dict(other.prefixes)
                and self.base == other.base)

    def __hash__(self) -> int:
        return hash(self._set)

    def __repr__(self) -> str:
        return f"<Graph {len(self)} triples, {len(self.prefixes)} prefixes>"

    @property
    def triple_set(self) -> frozenset:
        return self._set

    def objects(self, s, p: IRI) -> tuple:
        return tuple(self._spo.get(s, {}).get(p, ()))

    def subjects(self, p: IRI, o) -> tuple:
        return tuple(self._pos.get(p, {}).get(o, ()))

    def with_predicate(self, p: IRI) -> tuple:
        return tuple(self._by_p.get(p, ()))

    def predicates(self) -> tuple:
        return tuple(self._by_p)

    def about(self, s) -> Iterator[Triple]:
        for p, objs in self._spo.get(s, {}).items():
            for o in objs:
                yield Triple(s, p, o)

    def subject_terms(self) -> tuple:
        return tuple(self._spo)

    def sources_of(self, t: Triple) -> tuple:
        return self._provenance.get(t, ())

    def list_items(self, head: Term) -> list:
        """Members of an RDF collection starting at ``head`` (cycle-safe)."""
        first, rest, nil = IRI(RDF + "first"), IRI(RDF + "rest"), IRI(RDF + "nil")
        items, seen = [], set()
        node = head
        while node != nil and node not in seen:
            seen.add(node)
            firsts = self.objects(node, first)
            if not firsts:
                break
            items.append(firsts[0])
            rests = self.objects(node, rest)
            if not rests:
                break
            node = rests[0]
        return items


def _rename(term, tag: str):
    return BNode(f"{tag}_{term.label}") if isinstance(term, BNode) else term


def merge(graphs: Sequence[Graph], sources: Optional[Sequence[str]] = None) -> Graph:
    """Union of ``graphs`` with blank nodes kept apart per input graph.

    Prefix collisions keep the earliest graph's mapping and are recorded in
    the result's ``warnings``.
    """
    if sources is None:
        sources = [g.source if g.source is not None else f"graph{i}" for i, g in enumerate(graphs)]
    triples: list[Triple] = []
    provenance: dict[Triple, list] = {}
    prefixes: dict[str, str] = {}
    warnings: list[str] = []
    for i, (g, src) in enumerate(zip(graphs, sources)):
        warnings.extend(g.warnings)
        for name, ns in g.prefixes.items():
            if name not in prefixes:
                prefixes[name] = ns
            elif prefixes[name] != ns:
                warnings.append(f"prefix {name!r}: keeping <{prefixes[name]}>, "
                                f"ignoring <{ns}> from {src}")
        tag = f"g{i}"
        for t in g:
            r = Triple(_rename(t.s, tag), t.p, _rename(t.o, tag))
            if r not in provenance:
                provenance[r] = []
                triples.append(r)
            inherited = g.sources_of(t) or (src,)
            for s in inherited:
                if s not in provenance[r]:
                    provenance[r].append(s)
    base = graphs[0].base if graphs else None
    return Graph(triples, prefixes, base, warnings=warnings,
                 provenance={t: tuple(v) for t, v in provenance.items()})

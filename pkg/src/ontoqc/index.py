"""Entity roles (class / individual / property kinds) and taxonomy queries."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from types import MappingProxyType
from typing import Iterator, Mapping

from .graph import Graph
from .terms import IRI, OWL, RDF, RDFS
from .vocab import Vocabulary

_BUILTIN = (RDF, RDFS, OWL)
_OWL_THING = IRI(OWL + "Thing")
_RDFS_CLASS = IRI(RDFS + "Class")
_OBJECT_PROPERTY_TRAITS = frozenset(IRI(OWL + n) for n in (
    "TransitiveProperty", "SymmetricProperty", "AsymmetricProperty",
    "ReflexiveProperty", "IrreflexiveProperty", "InverseFunctionalProperty"))


def is_builtin(iri: IRI) -> bool:
    """True for RDF/RDFS/OWL vocabulary terms (owl:Thing excepted)."""
    return iri != _OWL_THING and any(iri.value.startswith(ns) for ns in _BUILTIN)


def is_category_type(o, v: Vocabulary) -> bool:
    """Whether ``x rdf:type o`` categorizes x (as opposed to declaring it)."""
    return isinstance(o, IRI) and o != v.named_individual_decl and not is_builtin(o)


@dataclass(frozen=True)
class EntityFlags:
    is_class: bool = False
    is_individual: bool = False
    is_object_prop: bool = False
    is_annotation_prop: bool = False
    is_datatype_prop: bool = False
    declaring_documents: frozenset = frozenset()

    @property
    def is_punned(self) -> bool:
        return self.is_class and self.is_individual

    @property
    def is_property(self) -> bool:
        return self.is_object_prop or self.is_annotation_prop or self.is_datatype_prop


class EntityIndex(Mapping):
    """Read-only map from IRI to :class:`EntityFlags`."""

    def __init__(self, flags: Mapping[IRI, EntityFlags]):
        self._flags = MappingProxyType(dict(sorted(flags.items())))

    def __getitem__(self, iri: IRI) -> EntityFlags:
        return self._flags[iri]

    def get_flags(self, iri) -> EntityFlags:
        return self._flags.get(iri, _NONE)

    def __iter__(self) -> Iterator[IRI]:
        return iter(self._flags)

    def __len__(self) -> int:
        return len(self._flags)

    def __eq__(self, other):
        return isinstance(other, EntityIndex) and dict(self._flags) == dict(other._flags)

    def classes(self) -> list[IRI]:
        return [k for k, f in self._flags.items() if f.is_class]

    def individuals(self) -> list[IRI]:
        return [k for k, f in self._flags.items() if f.is_individual]

    def punned(self) -> list[IRI]:
        return [k for k, f in self._flags.items() if f.is_punned]

    def properties(self) -> list[IRI]:
        return [k for k, f in self._flags.items() if f.is_property]


_NONE = EntityFlags()


def classify_entities(g: Graph, v: Vocabulary) -> EntityIndex:
    roles: dict[IRI, dict] = {}

    def mark(x, key):
        if isinstance(x, IRI):
            roles.setdefault(x, {"docs": set()})[key] = True

    for t in g:
        if t.p == v.type_prop:
            o = t.o
            if isinstance(t.s, IRI):
                roles.setdefault(t.s, {"docs": set()})["docs"].update(g.sources_of(t))
            if o in (v.class_decl, _RDFS_CLASS):
                mark(t.s, "is_class")
            elif o == v.named_individual_decl:
                mark(t.s, "is_individual")
            elif o == v.object_prop_decl or o in _OBJECT_PROPERTY_TRAITS:
                mark(t.s, "is_object_prop")
            elif o == v.annotation_prop_decl:
                mark(t.s, "is_annotation_prop")
            elif o == v.datatype_prop_decl:
                mark(t.s, "is_datatype_prop")
            elif is_category_type(o, v):
                mark(t.s, "is_individual")
                mark(o, "is_class")
        elif t.p == v.subclass_prop:
            if isinstance(t.s, IRI) and isinstance(t.o, IRI):
                mark(t.s, "is_class")
                mark(t.o, "is_class")
    flags = {}
    for iri, r in roles.items():
        docs = frozenset(r.pop("docs"))
        if not r:
            continue
        flags[iri] = EntityFlags(declaring_documents=docs, **r)
    return EntityIndex(flags)


class Closure(frozenset):
    """A set of class IRIs; ``cyclic`` flags a subclass cycle inside it."""

    cyclic: bool = False

    def __new__(cls, items=(), cyclic: bool = False):
        obj = super().__new__(cls, items)
        obj.cyclic = cyclic
        return obj


def direct_subclasses(g: Graph, v: Vocabulary, c: IRI) -> set[IRI]:
    return {s for s in g.subjects(v.subclass_prop, c) if isinstance(s, IRI) and s != c}


def direct_superclasses(g: Graph, v: Vocabulary, c: IRI) -> set[IRI]:
    return {o for o in g.objects(c, v.subclass_prop) if isinstance(o, IRI) and o != c}


def _reach(g: Graph, v: Vocabulary, c: IRI, step) -> Closure:
    seen = {c}
    queue = deque([c])
    while queue:
        x = queue.popleft()
        for y in step(g, v, x):
            if y not in seen:
                seen.add(y)
                queue.append(y)
    return Closure(seen, _has_cycle(g, v, seen))


def _has_cycle(g: Graph, v: Vocabulary, nodes: set) -> bool:
    # Kahn's algorithm on the subclass edges induced by ``nodes``
    indeg = {n: 0 for n in nodes}
    succ: dict = {n: [] for n in nodes}
    for n in nodes:
        for sup in direct_superclasses(g, v, n):
            if sup in nodes:
                succ[n].append(sup)
                indeg[sup] += 1
    queue = deque(n for n, d in indeg.items() if d == 0)
    removed = 0
    while queue:
        n = queue.popleft()
        removed += 1
        for m in succ[n]:
            indeg[m] -= 1
            if indeg[m] == 0:
                queue.append(m)
    return removed < len(nodes)


def subclass_closure(g: Graph, v: Vocabulary, c: IRI) -> Closure:
    """``c`` and every class reaching it through subClassOf steps."""
    return _reach(g, v, c, direct_subclasses)


def superclass_closure(g: Graph, v: Vocabulary, c: IRI) -> Closure:
    return _reach(g, v, c, direct_superclasses)


def direct_types(g: Graph, v: Vocabulary, x) -> set[IRI]:
    return {o for o in g.objects(x, v.type_prop) if is_category_type(o, v)}


def instances_of(g: Graph, v: Vocabulary, c: IRI, transitive: bool = True) -> set[IRI]:
    classes = subclass_closure(g, v, c) if transitive else {c}
    out = set()
    for k in classes:
        if k == v.named_individual_decl:
            continue
        out.update(s for s in g.subjects(v.type_prop, k) if isinstance(s, IRI))
    return out


def member_of_kind(g: Graph, v: Vocabulary, x, root: IRI) -> bool:
    """x is the root, a (transitive) subclass of it, or a (transitive) instance of it."""
    if not isinstance(x, IRI):
        return False
    if root in superclass_closure(g, v, x):
        return True
    return any(root in superclass_closure(g, v, t) for t in direct_types(g, v, x))


def kind_members(g: Graph, v: Vocabulary, root: IRI) -> set[IRI]:
    return set(subclass_closure(g, v, root)) | instances_of(g, v, root, transitive=True)


class Taxonomy:
    """Memoized subclass/type lookups over one graph."""

    def __init__(self, g: Graph, v: Vocabulary):
        self.g = g
        self.v = v
        self.subs: dict[IRI, set] = {}
        self.supers: dict[IRI, set] = {}
        self.types: dict[IRI, set] = {}
        self.members: dict[IRI, set] = {}
        for t in g.with_predicate(v.subclass_prop):
            if isinstance(t.s, IRI) and isinstance(t.o, IRI) and t.s != t.o:
                self.subs.setdefault(t.o, set()).add(t.s)
                self.supers.setdefault(t.s, set()).add(t.o)
        for t in g.with_predicate(v.type_prop):
            if isinstance(t.s, IRI) and is_category_type(t.o, v):
                self.types.setdefault(t.s, set()).add(t.o)
                self.members.setdefault(t.o, set()).add(t.s)
        self._down: dict = {}
        self._up: dict = {}

    def _closure(self, c, edges, memo) -> frozenset:
        if c not in memo:
            seen = {c}
            queue = deque([c])
            while queue:
                for y in edges.get(queue.popleft(), ()):
                    if y not in seen:
                        seen.add(y)
                        queue.append(y)
            memo[c] = frozenset(seen)
        return memo[c]

    def descendants(self, c) -> frozenset:
        """``c`` plus all transitive subclasses."""
        return self._closure(c, self.subs, self._down)

    def ancestors(self, c) -> frozenset:
        """``c`` plus all transitive superclasses."""
        return self._closure(c, self.supers, self._up)

    def direct_instances(self, c) -> set:
        return self.members.get(c, set())

    def instances(self, c) -> set:
        out = set()
        for k in self.descendants(c):
            out |= self.members.get(k, set())
        return out

    def all_types(self, x) -> frozenset:
        """Every class x is an instance of, directly or through superclasses."""
        out: set = set()
        for t in self.types.get(x, ()):
            out |= self.ancestors(t)
        return frozenset(out)

    def is_kind(self, x, root: IRI) -> bool:
        return isinstance(x, IRI) and (root in self.ancestors(x) or root in self.all_types(x))

    def kind_members(self, root: IRI) -> set:
        return set(self.descendants(root)) | self.instances(root)

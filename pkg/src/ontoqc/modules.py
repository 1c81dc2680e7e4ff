"""owl:imports resolution, namespace cross-usage and Graphviz export."""

from __future__ import annotations

import os
from collections import deque
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping, Optional

from .digraph import find_cycles
from .graph import Graph, merge
from .terms import IRI, OWL, RDF, RDFS, XSD, namespace_of
from .turtle import parse_file
from .vocab import Vocabulary


class LocatorError(LookupError):
    pass


@dataclass(frozen=True)
class ModuleLocator:
    """Maps ontology IRIs to local documents.

    The catalog is consulted first; otherwise each search directory is
    scanned for ``<name>.ttl`` where ``name`` is the IRI's last segment.
    """

    catalog: Mapping[str, str] = field(default_factory=dict)
    search_dirs: tuple = ()

    @classmethod
    def from_catalog_file(cls, path, search_dirs=()) -> "ModuleLocator":
        base = Path(path).parent
        catalog = {}
        with open(path, encoding="utf-8") as fh:
            for n, line in enumerate(fh, 1):
                line = line.rstrip("\n")
                if not line.strip() or line.lstrip().startswith("#"):
                    continue
                parts = line.split("\t")
                if len(parts) != 2 or not parts[0].strip() or not parts[1].strip():
                    raise LocatorError(f"{path}:{n}: expected '<iri>\\t<relative-path>'")
                iri = parts[0].strip().strip("<>")
                catalog[iri] = os.path.normpath(str(base / parts[1].strip()))
        return cls(catalog, tuple(search_dirs))

    def locate(self, iri: IRI) -> str:
        key = iri.value
        if key in self.catalog:
            return self.catalog[key]
        name = key.rstrip("#/").rsplit("/", 1)[-1].rsplit("#", 1)[-1]
        for d in self.search_dirs:
            for candidate in (f"{name}.ttl", name):
                p = Path(d) / candidate
                if name and p.is_file():
                    return os.path.normpath(str(p))
        raise LocatorError(f"no document for <{key}>")


@dataclass(frozen=True)
class ModuleDescriptor:
    ontology_iri: IRI
    source_id: str
    imports: tuple
    graph: Graph = field(repr=False, compare=False)


@dataclass(frozen=True)
class ImportGraph:
    nodes: Mapping[IRI, ModuleDescriptor]
    edges: frozenset
    unresolved: frozenset
    entry: Optional[IRI] = None
    cycles: tuple = ()
    warnings: tuple = ()

    def module_iris(self) -> list[IRI]:
        return sorted(self.nodes)

    def merged(self) -> Graph:
        """Union of all module graphs in IRI order; provenance ids are module IRIs."""
        iris = self.module_iris()
        return merge([self.nodes[i].graph for i in iris], [i.value for i in iris])


def describe_module(g: Graph, source_id: str, v: Vocabulary) -> tuple[ModuleDescriptor, list[str]]:
    warnings = []
    declared = []
    for t in g:
        if t.p == v.type_prop and t.o == v.ontology_decl and isinstance(t.s, IRI):
            if t.s not in declared:
                declared.append(t.s)
    if declared:
        iri = declared[0]
        if len(declared) > 1:
            others = ", ".join(f"<{d}>" for d in declared[1:])
            warnings.append(f"{source_id}: several ontology declarations; using <{iri}>, ignoring {others}")
    elif g.base is not None:
        iri = g.base
    else:
        iri = IRI("urn:ontoqc:module:" + Path(source_id).stem)
    imports = []
    for o in g.objects(iri, v.imports_prop):
        if isinstance(o, IRI) and o not in imports:
            imports.append(o)
    return ModuleDescriptor(iri, source_id, tuple(imports), g), warnings


def resolve_imports(entry, locator: ModuleLocator, v: Optional[Vocabulary] = None) -> ImportGraph:
    """Breadth-first owl:imports closure from the ``entry`` document.

    Each document is parsed once.  Unresolvable imports are collected, not
    raised; a malformed document raises :class:`TurtleSyntaxError`.
    """
    v = v or Vocabulary()
    entry = str(entry)
    g = parse_file(entry, source=entry)
    first, warnings = describe_module(g, entry, v)
    nodes = {first.ontology_iri: first}
    by_path = {os.path.normpath(entry): first.ontology_iri}
    edges = set()
    unresolved = set()
    queue = deque([first.ontology_iri])
    while queue:
        mod = nodes[queue.popleft()]
        for target in mod.imports:
            if target in nodes:
                edges.add((mod.ontology_iri, target))
                continue
            try:
                path = locator.locate(target)
            except LocatorError:
                unresolved.add(target)
                edges.add((mod.ontology_iri, target))
                continue
            key = os.path.normpath(path)
            if key in by_path:
                resolved = by_path[key]
            else:
                sub, w = describe_module(parse_file(path, source=path), path, v)
                warnings.extend(w)
                resolved = sub.ontology_iri
                by_path[key] = resolved
                if resolved != target:
                    warnings.append(f"<{target}> resolved to {path}, which declares <{resolved}>")
                if resolved not in nodes:
                    nodes[resolved] = sub
                    queue.append(resolved)
            edges.add((mod.ontology_iri, resolved))
    cycles = find_cycles(set(nodes), edges)
    for c in cycles:
        warnings.append("import cycle: " + ", ".join(f"<{i}>" for i in c))
    for u in sorted(unresolved):
        warnings.append(f"unresolved import <{u}>")
    return ImportGraph(dict(sorted(nodes.items())), frozenset(edges), frozenset(unresolved),
                       first.ontology_iri, tuple(cycles), tuple(warnings))


def single_module(g: Graph, source_id: str, v: Optional[Vocabulary] = None) -> ImportGraph:
    mod, warnings = describe_module(g, source_id, v or Vocabulary())
    edges = frozenset((mod.ontology_iri, i) for i in mod.imports)
    return ImportGraph({mod.ontology_iri: mod}, edges, frozenset(mod.imports),
                       mod.ontology_iri, (), tuple(warnings))


# -- namespaces ---------------------------------------------------------------

_META_NAMESPACES = (RDF, RDFS, OWL, XSD)


def declared_namespaces(ig: ImportGraph) -> list[str]:
    found = set()
    for mod in ig.nodes.values():
        found.update(mod.graph.prefixes.values())
    return sorted(found)


def namespace_for(iri: IRI, declared) -> str:
    best = ""
    for ns in declared:
        if ns and iri.value.startswith(ns) and len(ns) > len(best):
            best = ns
    return best or namespace_of(iri)


@dataclass(frozen=True)
class UsageCounts:
    subject_count: int = 0
    object_count: int = 0


@dataclass(frozen=True)
class NamespaceUsage:
    rows: Mapping[tuple, UsageCounts]

    def for_module(self, module: IRI) -> dict[str, UsageCounts]:
        return {ns: c for (m, ns), c in self.rows.items() if m == module}


def namespace_usage(ig: ImportGraph) -> NamespaceUsage:
    declared = declared_namespaces(ig)
    counts: dict[tuple, list] = {}
    for iri, mod in ig.nodes.items():
        for t in mod.graph:
            if isinstance(t.s, IRI):
                counts.setdefault((iri, namespace_for(t.s, declared)), [0, 0])[0] += 1
            if isinstance(t.o, IRI):
                counts.setdefault((iri, namespace_for(t.o, declared)), [0, 0])[1] += 1
    rows = {k: UsageCounts(*counts[k]) for k in sorted(counts, key=lambda k: (k[0].value, k[1]))}
    return NamespaceUsage(rows)


def namespace_dependencies(ig: ImportGraph, exclude=_META_NAMESPACES) -> set[tuple]:
    """(subject namespace, object namespace) pairs over all module triples."""
    declared = declared_namespaces(ig)
    deps = set()
    for mod in ig.nodes.values():
        for t in mod.graph:
            if isinstance(t.s, IRI) and isinstance(t.o, IRI):
                a, b = namespace_for(t.s, declared), namespace_for(t.o, declared)
                if a != b and a not in exclude and b not in exclude:
                    deps.add((a, b))
    return deps


# -- dot ----------------------------------------------------------------------

def _q(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def export_dot(ig: ImportGraph, mode: str = "imports") -> str:
    if mode == "imports":
        resolved = {i.value for i in ig.nodes}
        nodes = sorted(resolved | {u.value for u in ig.unresolved})
        edges = sorted((a.value, b.value) for a, b in ig.edges)
        lines = ["digraph imports {"]
        for n in nodes:
            lines.append(f"  {_q(n)};" if n in resolved else f"  {_q(n)} [style=dashed];")
    elif mode == "namespaces":
        edges = sorted(namespace_dependencies(ig))
        used = {ns for (_, ns) in namespace_usage(ig).rows if ns not in _META_NAMESPACES}
        nodes = sorted(used | {x for e in edges for x in e})
        lines = ["digraph namespaces {"]
        lines.extend(f"  {_q(n)};" for n in nodes)
    else:
        raise ValueError(f"unknown mode {mode!r}")
    lines.extend(f"  {_q(a)} -> {_q(b)};" for a, b in edges)
    lines.append("}")
    return "\n".join(lines) + "\n"

"""Brute-force reference implementations used as test oracles.

They work on plain ``(s, p, o)`` string tuples, share no code with the
package, and favour obviousness over speed (nested loops, fixpoints).
"""

RDF_TYPE = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type"
SUBCLASS = "http://www.w3.org/2000/01/rdf-schema#subClassOf"
OWL = "http://www.w3.org/2002/07/owl#"
NAMED_INDIVIDUAL = OWL + "NamedIndividual"
OWL_CLASS = OWL + "Class"


def plain(g):
    """Package graph -> set of string triples (IRIs and literal lexicals)."""
    def s(t):
        for attr in ("value", "lexical", "label"):
            if hasattr(t, attr):
                return getattr(t, attr)
        raise TypeError(t)
    return {(s(t.s), s(t.p), s(t.o)) for t in g}


def category_types(triples):
    """(x, c) pairs for rdf:type assertions that categorize x."""
    skip = ("http://www.w3.org/1999/02/22-rdf-syntax-ns#",
            "http://www.w3.org/2000/01/rdf-schema#", OWL)
    return {(s, o) for s, p, o in triples
            if p == RDF_TYPE and (o == OWL + "Thing" or not o.startswith(skip))}


def classes(triples):
    out = set()
    for s, p, o in triples:
        if p == RDF_TYPE and o in (OWL_CLASS, "http://www.w3.org/2000/01/rdf-schema#Class"):
            out.add(s)
        if p == SUBCLASS:
            out.add(s)
            out.add(o)
    for x, c in category_types(triples):
        out.add(c)
    return out


def direct_subclasses(triples, c):
    return {s for s, p, o in triples if p == SUBCLASS and o == c and s != c}


def subclass_closure(triples, c):
    """Fixpoint iteration: everything reaching c by subClassOf steps, plus c."""
    result = {c}
    while True:
        grown = result | {s for s, p, o in triples if p == SUBCLASS and o in result}
        if grown == result:
            return result
        result = grown


def superclass_closure(triples, c):
    result = {c}
    while True:
        grown = result | {o for s, p, o in triples if p == SUBCLASS and s in result}
        if grown == result:
            return result
        result = grown


def direct_instance_count(triples, c):
    return len({x for x, k in category_types(triples) if k == c})


def instances(triples, c):
    closure = subclass_closure(triples, c)
    return {x for x, k in category_types(triples) if k in closure}


def die_focus(triples, in_scope, minimum=2):
    """Classes with 1..minimum-1 direct instances."""
    return {c for c in classes(triples)
            if in_scope(c) and 0 < direct_instance_count(triples, c) < minimum}


def empty_focus(triples, in_scope):
    return {c for c in classes(triples)
            if in_scope(c) and direct_instance_count(triples, c) == 0
            and not direct_subclasses(triples, c)}


def dse_focus(triples, in_scope):
    return {c for c in classes(triples) if in_scope(c) and len(direct_subclasses(triples, c)) == 1}


def sar_focus(triples, has_area, individuals, lo=1, hi=3):
    areas = {o for s, p, o in triples if p == has_area}
    out = set()
    for x in individuals - areas:
        n = len({o for s, p, o in triples if s == x and p == has_area})
        if n < lo or n > hi:
            out.add(x)
    return out


def is_kind(triples, x, root):
    if root in superclass_closure(triples, x):
        return True
    return any(root in superclass_closure(triples, c)
               for y, c in category_types(triples) if y == x)


def space_conformance_focus(triples, spaces, has_space, conforms_to, artifact_root):
    """Nested-loop pattern match, both hasSpace orientations."""
    out = set()
    for sp in spaces:
        assoc = set()
        for s, p, o in triples:
            if p == has_space and o == sp and s != sp:
                assoc.add(s)
            if p == has_space and s == sp and o != sp:
                assoc.add(o)
        assoc = {a for a in assoc if is_kind(triples, a, artifact_root)}
        found = False
        for a in assoc:
            for b in assoc:
                if a != b and (a, conforms_to, b) in triples:
                    found = True
        if not found:
            out.add(sp)
    return out


def disjoint_focus(triples, pairs):
    """Individuals whose inferred types include both members of a disjoint pair."""
    out = set()
    for x in {x for x, _ in category_types(triples)}:
        inferred = set()
        for y, c in category_types(triples):
            if y == x:
                inferred |= superclass_closure(triples, c)
        for a, b in pairs:
            if a in inferred and b in inferred:
                out.add(x)
    return out


def respects(order, constraints):
    """Every (before, after) constraint satisfied by a permutation."""
    pos = {x: i for i, x in enumerate(order)}
    return all(pos[a] < pos[b] for a, b in constraints if a in pos and b in pos)


def lexicographic_topo(nodes, constraints):
    """Repeatedly take the smallest node whose predecessors are all placed."""
    placed, remaining = [], set(nodes)
    while remaining:
        ready = sorted(n for n in remaining
                       if all(a not in remaining for a, b in constraints if b == n))
        if not ready:
            return None
        placed.append(ready[0])
        remaining.discard(ready[0])
    return placed


def reachable(edges, start):
    seen, frontier = {start}, [start]
    while frontier:
        n = frontier.pop()
        for a, b in edges:
            if a == n and b not in seen:
                seen.add(b)
                frontier.append(b)
    return seen

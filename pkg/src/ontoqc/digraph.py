"""Small directed-graph helpers shared by import resolution and issue ordering."""

from __future__ import annotations

import heapq
from typing import Hashable, Iterable


def _successors(nodes, edges) -> dict:
    succ: dict = {n: [] for n in nodes}
    for a, b in sorted(edges):
        if a in succ and b in succ:
            succ[a].append(b)
    return succ


def strongly_connected(nodes: Iterable[Hashable], edges) -> list[list]:
    """Tarjan's algorithm, iterative; components come back sorted."""
    succ = _successors(nodes, edges)
    index: dict = {}
    low: dict = {}
    on_stack: set = set()
    stack: list = []
    out = []
    counter = 0

    def visit(n):
        nonlocal counter
        index[n] = low[n] = counter
        counter += 1
        stack.append(n)
        on_stack.add(n)

    for root in sorted(succ):
        if root in index:
            continue
        visit(root)
        calls = [(root, iter(succ[root]))]
        while calls:
            node, it = calls[-1]
            for nxt in it:
                if nxt not in index:
                    visit(nxt)
                    calls.append((nxt, iter(succ[nxt])))
                    break
                if nxt in on_stack:
                    low[node] = min(low[node], index[nxt])
            else:
                calls.pop()
                if calls:
                    parent = calls[-1][0]
                    low[parent] = min(low[parent], low[node])
                if low[node] == index[node]:
                    comp = []
                    while True:
                        w = stack.pop()
                        on_stack.discard(w)
                        comp.append(w)
                        if w == node:
                            break
                    out.append(sorted(comp))
    return out


def find_cycles(nodes, edges) -> list[tuple]:
    """Strongly connected groups containing a cycle (self-loops included)."""
    edges = set(edges)
    cycles = []
    for comp in strongly_connected(nodes, edges):
        if len(comp) > 1 or (comp[0], comp[0]) in edges:
            cycles.append(tuple(comp))
    return sorted(cycles)


def cycle_path(nodes, edges) -> list:
    """One concrete cycle ``[a, b, ..., a]`` or ``[]`` when acyclic."""
    for comp in find_cycles(nodes, edges):
        members = set(comp)
        succ = _successors(members, edges)
        start = comp[0]
        path, seen = [start], {start: 0}
        node = start
        while True:
            node = next(m for m in succ[node])
            if node in seen:
                return path[seen[node]:] + [node]
            seen[node] = len(path)
            path.append(node)
    return []


class CycleError(ValueError):
    def __init__(self, cycle: list):
        self.cycle = cycle
        super().__init__("cycle: " + " -> ".join(str(c) for c in cycle))


def topological_order(nodes, edges) -> list:
    """Kahn's algorithm; ``(a, b)`` means a comes before b; ties by smallest node."""
    nodes = set(nodes)
    succ = _successors(nodes, edges)
    indeg = {n: 0 for n in nodes}
    for a in succ:
        for b in succ[a]:
            indeg[b] += 1
    heap = [n for n, d in indeg.items() if d == 0]
    heapq.heapify(heap)
    out = []
    while heap:
        n = heapq.heappop(heap)
        out.append(n)
        for m in succ[n]:
            indeg[m] -= 1
            if indeg[m] == 0:
                heapq.heappush(heap, m)
    if len(out) < len(nodes):
        raise CycleError(cycle_path(nodes, edges))
    return out

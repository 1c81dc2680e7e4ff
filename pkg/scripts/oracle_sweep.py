#!/usr/bin/env python3
"""Compare rule findings with the brute-force oracles on random graphs.

Usage: python3 scripts/oracle_sweep.py [--count N] [--seed S]

Covers DIE, DIE-EMPTY, DSE and DISJOINT.  Prints one line per rule with the
agreement rate and the first disagreeing seed, if any.
"""

import argparse
import random
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "tests"))

import oracles  # noqa: E402
from ontoqc.graph import Graph  # noqa: E402
from ontoqc.index import classify_entities  # noqa: E402
from ontoqc.rules import check_die, check_disjointness, check_dse, check_empty_classes  # noqa: E402
from ontoqc.terms import IRI, OWL, RDF, RDFS, Triple  # noqa: E402
from ontoqc.vocab import Vocabulary  # noqa: E402

E = "http://sweep.example/"
TYPE, SUB, DISJ = IRI(RDF + "type"), IRI(RDFS + "subClassOf"), IRI(OWL + "disjointWith")


def random_graph(rng):
    nc, ni = rng.randint(1, 30), rng.randint(0, 60)
    t = [Triple(IRI(f"{E}C{i}"), TYPE, IRI(OWL + "Class")) for i in range(nc)]
    t += [Triple(IRI(f"{E}C{i}"), SUB, IRI(f"{E}C{rng.randrange(i)}"))
          for i in range(1, nc) if rng.random() < 0.7]
    pairs = set()
    for _ in range(rng.randint(0, 3)):
        if nc > 1:
            a, b = rng.sample(range(nc), 2)
            t.append(Triple(IRI(f"{E}C{a}"), DISJ, IRI(f"{E}C{b}")))
            pairs |= {(f"{E}C{a}", f"{E}C{b}"), (f"{E}C{b}", f"{E}C{a}")}
    for k in range(ni):
        for c in rng.sample(range(nc), min(nc, rng.choice([1, 1, 2]))):
            t.append(Triple(IRI(f"{E}x{k}"), TYPE, IRI(f"{E}C{c}")))
    return Graph(t), pairs


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--count", type=int, default=500)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)
    v = Vocabulary()
    in_scope = lambda x: x.startswith(E)
    agree = {"DIE": 0, "DIE-EMPTY": 0, "DSE": 0, "DISJOINT": 0}
    first_bad = {}
    for n in range(args.count):
        seed = args.seed + n
        g, pairs = random_graph(random.Random(seed))
        idx = classify_entities(g, v)
        t = oracles.plain(g)
        got = {
            "DIE": {f.focus.value for f in check_die(g, idx, v)},
            "DIE-EMPTY": {f.focus.value for f in check_empty_classes(g, idx, v)},
            "DSE": {f.focus.value for f in check_dse(g, idx, v)},
            # class-level disjointness findings have no individual oracle
            "DISJOINT": {f.focus.value for f in check_disjointness(g, idx, v) if "/x" in f.focus.value},
        }
        want = {
            "DIE": oracles.die_focus(t, in_scope),
            "DIE-EMPTY": oracles.empty_focus(t, in_scope),
            "DSE": oracles.dse_focus(t, in_scope),
            "DISJOINT": oracles.disjoint_focus(t, pairs),
        }
        for rule in agree:
            if got[rule] == want[rule]:
                agree[rule] += 1
            else:
                first_bad.setdefault(rule, seed)
    for rule, ok in agree.items():
        extra = f"  first mismatch at seed {first_bad[rule]}" if rule in first_bad else ""
        print(f"{rule:10} {ok}/{args.count}{extra}")
    return 1 if first_bad else 0


if __name__ == "__main__":
    sys.exit(main())

#!/usr/bin/env python3
"""Run the snapshot integration check against a local copy of the FSL release.

Usage: python3 scripts/check_snapshot.py DIR [--entry fsl.ttl]

DIR holds the release's Turtle modules.  An optional ``catalog.txt`` maps
module IRIs to files and an optional ``exceptions.tsv`` is applied to the
full validation run.  Exit status is 0 when disjointness yields no errors and
validation passes.
"""

import argparse
import json
import sys
from pathlib import Path

from ontoqc.cli import main as ontoqc


def _run(args):
    print("$ ontoqc " + " ".join(map(str, args)), file=sys.stderr)
    return ontoqc([str(a) for a in args])


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("dir", type=Path)
    ap.add_argument("--entry", default="fsl.ttl")
    args = ap.parse_args(argv)
    common = []
    if (args.dir / "catalog.txt").exists():
        common += ["--catalog", args.dir / "catalog.txt"]
    entry = args.dir / args.entry
    disjoint = _run([*common, "--enable", "DISJOINT", "validate", entry])
    if (args.dir / "exceptions.tsv").exists():
        common += ["--exceptions", args.dir / "exceptions.tsv"]
    full = _run([*common, "validate", entry])
    print(json.dumps({"disjointness_exit": disjoint, "validate_exit": full}))
    return 0 if disjoint == 0 and full == 0 else 1


if __name__ == "__main__":
    sys.exit(main())

"""Command-line front end: ``validate``, ``report``, ``deps`` and ``issues``.

Exit codes: 0 success / pass, 1 findings at or above the threshold (or
issue integrity problems), 2 usage, configuration or parse errors.
Payload goes to stdout, diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
import urllib.error
import urllib.request
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from .digraph import CycleError
from .graph import Graph
from .index import classify_entities
from .issues import (check_issues, findings_to_issues, issues_to_json, issues_to_turtle,
                     order_issues, parse_issues, require_issue_vocabulary)
from .metrics import TABLE_NAMES, build_table, serialize_table
from .modules import (ImportGraph, LocatorError, ModuleLocator, export_dot, namespace_usage,
                      resolve_imports)
from .rules import (RULE_IDS, ExceptionList, Finding, Rule, ValidationReport, default_registry,
                    krl_targets, render_report, run_rules, valid_link)
from .tabular import csv_text
from .terms import IRI, Literal
from .turtle import TurtleSyntaxError
from .vocab import Settings, VocabularyError, load_settings

EXIT_OK, EXIT_FINDINGS, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    entries: list
    catalog: Optional[str] = None
    vocab: Optional[str] = None
    exceptions: Optional[str] = None
    enable: list = field(default_factory=list)
    disable: list = field(default_factory=list)
    fail_on: str = "error"
    format: str = "text"
    module: Optional[str] = None
    online: bool = False
    timeout: float = 5.0
    merge_all: bool = False

    @classmethod
    def from_args(cls, ns: argparse.Namespace) -> "RunConfig":
        return cls(list(ns.entry), ns.catalog, ns.vocab, ns.exceptions, ns.enable or [],
                   ns.disable or [], ns.fail_on, ns.format, ns.module, ns.online, ns.timeout,
                   ns.merge_all)


# -- loading --------------------------------------------------------------------

@dataclass
class Loaded:
    settings: Settings
    imports: ImportGraph
    graph: Graph
    warnings: list


def _merge_import_graphs(graphs: list) -> ImportGraph:
    if len(graphs) == 1:
        return graphs[0]
    nodes, edges, unresolved, cycles, warnings = {}, set(), set(), set(), []
    for ig in graphs:
        nodes.update(ig.nodes)
        edges |= ig.edges
        unresolved |= ig.unresolved
        cycles.update(ig.cycles)
        warnings.extend(w for w in ig.warnings if w not in warnings)
    unresolved -= set(nodes)
    return ImportGraph(dict(sorted(nodes.items())), frozenset(edges), frozenset(unresolved),
                       graphs[0].entry, tuple(sorted(cycles)), tuple(warnings))


def load(cfg: RunConfig) -> Loaded:
    if not cfg.entries:
        raise UsageError("no entry document given")
    if len(cfg.entries) > 1 and not cfg.merge_all:
        raise UsageError("several entry documents given; pass --merge-all to combine them")
    settings = load_settings(cfg.vocab) if cfg.vocab else Settings()
    v = settings.vocabulary
    graphs = []
    for entry in cfg.entries:
        if not Path(entry).is_file():
            raise UsageError(f"cannot read entry document {entry}")
        dirs = (str(Path(entry).parent),)
        locator = (ModuleLocator.from_catalog_file(cfg.catalog, dirs) if cfg.catalog
                   else ModuleLocator({}, dirs))
        graphs.append(resolve_imports(entry, locator, v))
    ig = _merge_import_graphs(graphs)
    if cfg.module:
        key = IRI(cfg.module)
        if key not in ig.nodes:
            raise UsageError(f"module <{cfg.module}> is not part of the import closure")
        mod = ig.nodes[key]
        graph = Graph(mod.graph, mod.graph.prefixes, mod.graph.base,
                      provenance={t: (key.value,) for t in mod.graph})
    else:
        graph = ig.merged()
    warnings = list(ig.warnings) + [w for w in graph.warnings if w not in ig.warnings]
    return Loaded(settings, ig, graph, warnings)


def build_registry(cfg: RunConfig, settings: Settings) -> list[Rule]:
    known = set(RULE_IDS)
    for rid in list(cfg.enable) + list(cfg.disable):
        if rid not in known:
            raise UsageError(f"unknown rule id {rid!r}; known: {', '.join(RULE_IDS)}")
    registry = default_registry(settings.rules)
    if cfg.enable:
        registry = [r for r in registry if r.id in cfg.enable]
    return [r for r in registry if r.id not in cfg.disable]


# -- online link checks -----------------------------------------------------------

def _head(url: str, timeout: float) -> tuple[str, Optional[int], Optional[str]]:
    req = urllib.request.Request(url, method="HEAD", headers={"User-Agent": "ontoqc-linkcheck"})
    try:
        with urllib.request.urlopen(req, timeout=timeout) as resp:
            return url, resp.status, None
    except urllib.error.HTTPError as e:
        return url, e.code, None
    except (urllib.error.URLError, OSError, ValueError) as e:
        return url, None, str(getattr(e, "reason", e))


def online_rule(timeout: float, warnings: list) -> Rule:
    """HEAD-checks every foaf link on KRL targets; dead links become findings."""
    def check(ctx, config):
        links: dict[str, set] = {}
        for kind in ("class", "property", "individual"):
            for x in krl_targets(ctx.g, ctx.idx, ctx.v, kind):
                if not ctx.v.in_scope(x):
                    continue
                for p in ctx.v.link_props:
                    for o in ctx.g.objects(x, p):
                        text = o.value if isinstance(o, IRI) else o.lexical if isinstance(o, Literal) else ""
                        if valid_link(text):
                            links.setdefault(text, set()).add(x)
        with ThreadPoolExecutor(max_workers=8) as pool:
            results = sorted(pool.map(lambda u: _head(u, timeout), sorted(links)))
        out = []
        for url, status, err in results:
            if err is not None:
                warnings.append(f"link check skipped for {url}: {err}")
            elif status >= 400:
                out.extend(Finding("KRL-LINK-ONLINE", x, f"link {url} answered HTTP {status}")
                           for x in sorted(links[url]))
        return out
    return Rule("KRL-LINK-ONLINE", "warning", "linked pages must be reachable", check)


# -- commands ---------------------------------------------------------------------

def _emit(text: str) -> None:
    sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _diag(lines) -> None:
    for line in lines:
        print(f"ontoqc: warning: {line}", file=sys.stderr)


def validate(cfg: RunConfig, loaded: Optional[Loaded] = None) -> tuple[ValidationReport, list]:
    loaded = loaded or load(cfg)
    v = loaded.settings.vocabulary
    registry = build_registry(cfg, loaded.settings)
    warnings = list(loaded.warnings)
    if cfg.online:
        registry.append(online_rule(cfg.timeout, warnings))
    exceptions = ExceptionList.load(cfg.exceptions) if cfg.exceptions else ExceptionList()
    idx = classify_entities(loaded.graph, v)
    report = run_rules(loaded.graph, idx, v, registry, exceptions, cfg.fail_on, loaded.imports)
    return report, warnings + list(report.warnings)


def cmd_validate(cfg: RunConfig) -> int:
    report, warnings = validate(cfg)
    _diag(warnings)
    _emit(render_report(report, cfg.format))
    return EXIT_FINDINGS if report.verdict == "fail" else EXIT_OK


def cmd_report(cfg: RunConfig, table: str) -> int:
    loaded = load(cfg)
    _diag(loaded.warnings)
    v = loaded.settings.vocabulary
    t = build_table(table, loaded.graph, classify_entities(loaded.graph, v), v)
    sys.stdout.write(serialize_table(t, cfg.format).decode("utf-8"))
    return EXIT_OK


def _deps_payload(ig: ImportGraph, mode: str, fmt: str) -> str:
    if mode == "imports":
        edges = sorted((a.value, b.value, b not in ig.unresolved) for a, b in ig.edges)
        if fmt == "json":
            return json.dumps({
                "nodes": [i.value for i in ig.module_iris()],
                "edges": [[a, b] for a, b, _ in edges],
                "unresolved": sorted(u.value for u in ig.unresolved),
                "cycles": [[i.value for i in c] for c in ig.cycles],
            }, indent=2) + "\n"
        if fmt == "csv":
            return csv_text(("source", "target", "resolved"),
                            ((a, b, "true" if ok else "false") for a, b, ok in edges))
        lines = [f"<{a}> -> <{b}>" + ("" if ok else " (unresolved)") for a, b, ok in edges]
        lines.append(f"{len(ig.nodes)} module(s), {len(edges)} import edge(s), "
                     f"{len(ig.unresolved)} unresolved, {len(ig.cycles)} cycle(s)")
        return "\n".join(lines) + "\n"
    rows = [(m.value, ns, c.subject_count, c.object_count)
            for (m, ns), c in namespace_usage(ig).rows.items()]
    rows.sort(key=lambda r: (r[0], r[1]))
    if fmt == "json":
        return json.dumps([{"module": m, "namespace": ns, "subjects": s, "objects": o}
                           for m, ns, s, o in rows], indent=2) + "\n"
    return csv_text(("module", "namespace", "subjects", "objects"), rows,
                    delimiter="," if fmt == "csv" else "\t")


def cmd_deps(cfg: RunConfig, mode: str, dot: bool) -> int:
    loaded = load(cfg)
    _diag(loaded.warnings)
    if dot:
        sys.stdout.write(export_dot(loaded.imports, mode))
    else:
        sys.stdout.write(_deps_payload(loaded.imports, mode, cfg.format))
    return EXIT_OK


def cmd_issues(cfg: RunConfig, action: str, report_path: Optional[str]) -> int:
    if action == "from-findings":
        if report_path:
            settings = load_settings(cfg.vocab) if cfg.vocab else Settings()
            with open(report_path, encoding="utf-8") as fh:
                data = json.load(fh)
            report = ValidationReport.from_dict(data if isinstance(data, dict) else {"findings": data})
        else:
            loaded = load(cfg)
            settings = loaded.settings
            report, warnings = validate(cfg, loaded)
            _diag(warnings)
        v = settings.vocabulary
        require_issue_vocabulary(v)
        ledger = findings_to_issues(report, v.issues_namespace)
        _emit(issues_to_json(ledger) if cfg.format == "json" else issues_to_turtle(ledger, v))
        return EXIT_OK
    loaded = load(cfg)
    _diag(loaded.warnings)
    v = loaded.settings.vocabulary
    ledger = parse_issues(loaded.graph, v)
    if action == "check":
        findings = check_issues(ledger)
        counts = {s: sum(1 for f in findings if f.severity == s) for s in ("info", "warning", "error")}
        report = ValidationReport(tuple(findings), counts, (), "fail" if findings else "pass", "info")
        _emit(render_report(report, cfg.format))
        return EXIT_FINDINGS if findings else EXIT_OK
    try:
        ordered = order_issues(ledger)
    except CycleError as e:
        print("ontoqc: error: resolveAfter cycle: "
              + " -> ".join(f"<{i.value}>" for i in e.cycle), file=sys.stderr)
        return EXIT_FINDINGS
    if cfg.format == "json":
        _emit(issues_to_json(ledger, ordered))
    elif cfg.format == "csv":
        sys.stdout.write(csv_text(("position", "id"), ((n, i.id.value) for n, i in enumerate(ordered, 1))))
    else:
        sys.stdout.write("".join(i.id.value + "\n" for i in ordered))
    return EXIT_OK


# -- argument parsing ---------------------------------------------------------------

def _common(defaults: bool) -> argparse.ArgumentParser:
    """Global flags; subcommands repeat them with suppressed defaults."""
    d = (lambda x: x) if defaults else (lambda x: argparse.SUPPRESS)
    p = argparse.ArgumentParser(add_help=False)
    g = p.add_argument_group("global options")
    g.add_argument("--catalog", metavar="PATH", default=d(None),
                   help="tab-separated 'IRI<TAB>path' catalog for owl:imports")
    g.add_argument("--vocab", metavar="PATH", default=d(None),
                   help="TOML file with vocabulary and rule overrides")
    g.add_argument("--exceptions", metavar="PATH", default=d(None),
                   help="exception list: 'ruleId<TAB>focus<TAB>reason' per line")
    g.add_argument("--format", choices=("text", "json", "csv"), default=d("text"))
    g.add_argument("--fail-on", choices=("error", "warning", "info"), default=d("error"),
                   help="lowest severity that fails validation (default: error)")
    g.add_argument("--module", metavar="IRI", default=d(None),
                   help="restrict to one module of the import closure")
    g.add_argument("--online", action="store_true", default=d(False),
                   help="HEAD-check foaf links (network failures only warn)")
    g.add_argument("--timeout", type=float, default=d(5.0), metavar="SECONDS",
                   help="per-request timeout for --online (default: 5)")
    g.add_argument("--merge-all", action="store_true", default=d(False),
                   help="accept and merge several entry documents")
    g.add_argument("--enable", action="append", metavar="RULE", default=d(None),
                   help="run only these rules (repeatable)")
    g.add_argument("--disable", action="append", metavar="RULE", default=d(None),
                   help="skip these rules (repeatable)")
    return p


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ontoqc", description="Quality checks for OWL ontologies in Turtle.",
                                     parents=[_common(True)])
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")
    quiet = [_common(False)]

    p = sub.add_parser("validate", parents=quiet, help="run the rule registry")
    p.add_argument("entry", nargs="*", help="entry Turtle document(s)")

    p = sub.add_parser("report", parents=quiet, help="print a metrics table")
    p.add_argument("--table", required=True, choices=TABLE_NAMES)
    p.add_argument("entry", nargs="*")

    p = sub.add_parser("deps", parents=quiet, help="module and namespace dependencies")
    p.add_argument("--mode", choices=("imports", "namespaces"), default="imports")
    p.add_argument("--dot", action="store_true", help="emit Graphviz dot")
    p.add_argument("entry", nargs="*")

    p = sub.add_parser("issues", parents=quiet, help="check, order or draft issues")
    p.add_argument("action", choices=("check", "order", "from-findings"))
    p.add_argument("--report", metavar="PATH", help="JSON validation report (from-findings)")
    p.add_argument("entry", nargs="*")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_USAGE
    cfg = RunConfig.from_args(ns)
    try:
        if ns.command == "validate":
            return cmd_validate(cfg)
        if ns.command == "report":
            return cmd_report(cfg, ns.table)
        if ns.command == "deps":
            return cmd_deps(cfg, ns.mode, ns.dot)
        return cmd_issues(cfg, ns.action, ns.report)
    except (UsageError, VocabularyError, LocatorError, TurtleSyntaxError, OSError,
            json.JSONDecodeError, ValueError, KeyError) as e:
        where = f" ({e.source})" if isinstance(e, TurtleSyntaxError) and getattr(e, "source", None) else ""
        print(f"ontoqc: error: {e}{where}", file=sys.stderr)
        return EXIT_USAGE
    except Exception as e:  # keep the exit-code contract total
        print(f"ontoqc: internal error: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())

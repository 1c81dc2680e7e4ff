"""Quality checks, metrics and issue tracking for OWL ontologies kept in Turtle."""

from .graph import Graph, merge
from .index import EntityFlags, EntityIndex, Taxonomy, classify_entities
from .issues import Issue, IssueLedger, check_issues, findings_to_issues, order_issues, parse_issues
from .metrics import MetricsTable, build_table, serialize_table
from .modules import ImportGraph, ModuleLocator, export_dot, resolve_imports
from .rules import (ExceptionEntry, ExceptionList, Finding, Rule, ValidationReport,
                    default_registry, run_rules)
from .terms import IRI, BNode, Literal, Triple
from .turtle import TurtleSyntaxError, parse_file, parse_turtle, serialize_turtle
from .vocab import Settings, Vocabulary, load_settings

__version__ = "0.1.0"

"""A Turtle 1.1 reader and a stable debug writer.

Supported: @prefix/@base and SPARQL-style PREFIX/BASE, IRIs, prefixed
names, blank nodes (labelled, ``[]`` and property lists), collections,
string/numeric/boolean literals.  RDF-star and graph blocks are rejected.
"""

from __future__ import annotations

import re
from typing import Optional, Union
from urllib.parse import urljoin

from .graph import Graph
from .terms import (BNode, IRI, LANG_STRING, Literal, RDF, XSD, XSD_STRING,
                    Term, Triple, term_key)

_BASE_CHARS = (
    "A-Za-z\u00C0-\u00D6\u00D8-\u00F6\u00F8-\u02FF\u0370-\u037D\u037F-\u1FFF"
    "\u200C-\u200D\u2070-\u218F\u2C00-\u2FEF\u3001-\uD7FF\uF900-\uFDCF"
    "\uFDF0-\uFFFD\U00010000-\U000EFFFF"
)
_U = _BASE_CHARS + "_"
_CHARS = _U + "\\-0-9\u00B7\u0300-\u036F\u203F-\u2040"
_PLX = r"(?:%[0-9A-Fa-f]{2}|\\[_~.\-!$&'()*+,;=/?#@%])"

_PN_PREFIX = re.compile(f"[{_BASE_CHARS}](?:[{_CHARS}.]*[{_CHARS}])?")
_PN_LOCAL = re.compile(f"(?:[{_U}:0-9]|{_PLX})(?:[{_CHARS}.:]|{_PLX})*")
_BNODE_LABEL = re.compile(f"_:([{_U}0-9](?:[{_CHARS}.]*[{_CHARS}])?)")
_LANGTAG = re.compile(r"@([a-zA-Z]+(?:-[a-zA-Z0-9]+)*)")
_NUMBER = re.compile(
    r"[+-]?(?:(?P<double>(?:[0-9]+\.[0-9]*|\.[0-9]+|[0-9]+)[eE][+-]?[0-9]+)"
    r"|(?P<decimal>[0-9]*\.[0-9]+)|(?P<integer>[0-9]+))"
)
_BOOLEAN = re.compile(f"(true|false)(?![{_CHARS}.:])")
_NAME_CONT = re.compile(f"[{_CHARS}.:]")
_KEYWORD = re.compile(r"(?i)(PREFIX|BASE|GRAPH)(?=\s)")
_ECHAR = {"t": "\t", "b": "\b", "n": "\n", "r": "\r", "f": "\f",
          '"': '"', "'": "'", "\\": "\\"}

_RDF_TYPE = IRI(RDF + "type")
_RDF_FIRST = IRI(RDF + "first")
_RDF_REST = IRI(RDF + "rest")
_RDF_NIL = IRI(RDF + "nil")
_XSD_INTEGER = IRI(XSD + "integer")
_XSD_DECIMAL = IRI(XSD + "decimal")
_XSD_DOUBLE = IRI(XSD + "double")
_XSD_BOOLEAN = IRI(XSD + "boolean")


class TurtleSyntaxError(ValueError):
    def __init__(self, message: str, line: int, column: int, token: str = ""):
        self.message = message
        self.line = line
        self.column = column
        self.token = token
        self.source = None
        near = f" near {token!r}" if token else ""
        super().__init__(f"line {line}, column {column}: {message}{near}")


class _Parser:
    def __init__(self, text: str, base: Optional[str], source: Optional[str]):
        self.text = text
        self.i = 0
        self.base = base
        self.source = source
        self.prefixes: dict[str, str] = {}
        self.triples: list[Triple] = []
        self.bnode_labels: dict[str, BNode] = {}
        self.bnode_count = 0

    # -- error reporting --------------------------------------------------

    def error(self, message: str, at: Optional[int] = None):
        i = self.i if at is None else at
        line = self.text.count("\n", 0, i) + 1
        column = i - (self.text.rfind("\n", 0, i) + 1) + 1
        m = re.compile(r"\S{1,20}").match(self.text, i)
        raise TurtleSyntaxError(message, line, column, m.group(0) if m else "")

    # -- lexical helpers --------------------------------------------------

    def skip(self):
        text, n = self.text, len(self.text)
        while self.i < n:
            c = text[self.i]
            if c in " \t\r\n":
                self.i += 1
            elif c == "#":
                j = text.find("\n", self.i)
                self.i = n if j < 0 else j + 1
            else:
                break

    def peek(self, k: int = 1) -> str:
        return self.text[self.i:self.i + k]

    def at_end(self) -> bool:
        self.skip()
        return self.i >= len(self.text)

    def expect(self, s: str):
        self.skip()
        if not self.text.startswith(s, self.i):
            self.error(f"expected {s!r}")
        self.i += len(s)

    def fresh_bnode(self) -> BNode:
        b = BNode(f"b{self.bnode_count}")
        self.bnode_count += 1
        return b

    def emit(self, s, p, o):
        self.triples.append(Triple(s, p, o))

    # -- grammar ----------------------------------------------------------

    def parse(self) -> Graph:
        while not self.at_end():
            self.statement()
        return Graph(self.triples, self.prefixes,
                     IRI(self.base) if self.base else None, source=self.source)

    def statement(self):
        self.skip()
        c = self.peek()
        if c == "@":
            if self.text.startswith("@prefix", self.i):
                self.i += len("@prefix")
                self.prefix_decl()
                self.expect(".")
            elif self.text.startswith("@base", self.i):
                self.i += len("@base")
                self.base_decl()
                self.expect(".")
            else:
                self.error("unknown directive")
            return
        m = _KEYWORD.match(self.text, self.i)
        if m:
            word = m.group(1).upper()
            if word == "GRAPH":
                self.error("named graphs (quads) are not supported")
            self.i = m.end()
            if word == "PREFIX":
                self.prefix_decl()
            else:
                self.base_decl()
            return
        if c == "{":
            self.error("graph blocks (quads) are not supported")
        self.triples_stmt()
        self.skip()
        if self.peek() == "{":
            self.error("named graphs (quads) are not supported")
        self.expect(".")

    def prefix_decl(self):
        self.skip()
        m = _PN_PREFIX.match(self.text, self.i)
        name = m.group(0) if m else ""
        j = self.i + len(name)
        if self.text[j:j + 1] != ":":
            self.error("expected prefix name ending in ':'")
        self.i = j + 1
        self.skip()
        self.prefixes[name] = self.iriref().value

    def base_decl(self):
        self.skip()
        self.base = self.iriref().value

    def triples_stmt(self):
        self.skip()
        if self.peek() == "[":
            subj = self.blank_node_property_list()
            self.skip()
            if self.peek() != ".":
                self.predicate_object_list(subj)
        else:
            subj = self.subject()
            self.predicate_object_list(subj)

    def subject(self):
        c = self.peek()
        if c == "(":
            return self.collection()
        if self.text.startswith("_:", self.i):
            return self.blank_label()
        if self.text.startswith("<<", self.i):
            self.error("RDF-star quoted triples are not supported")
        if c == "<" or c == ":" or _PN_PREFIX.match(self.text, self.i):
            return self.iri()
        self.error("expected subject")

    def predicate_object_list(self, subj):
        self.verb_object_list(subj)
        while True:
            self.skip()
            if self.peek() != ";":
                return
            while self.peek() == ";":
                self.i += 1
                self.skip()
            if self.peek() in (".", "]", "") or self.peek() == "}":
                return
            self.verb_object_list(subj)

    def verb_object_list(self, subj):
        self.skip()
        nxt = self.text[self.i + 1:self.i + 2]
        if self.peek() == "a" and not _NAME_CONT.match(nxt):
            self.i += 1
            pred = _RDF_TYPE
        else:
            if self.peek() == "[" or self.text.startswith("_:", self.i):
                self.error("predicate must be an IRI")
            pred = self.iri()
        self.object(subj, pred)
        while True:
            self.skip()
            if self.peek() != ",":
                return
            self.i += 1
            self.object(subj, pred)

    def object(self, subj, pred):
        self.emit(subj, pred, self.object_term())

    def object_term(self) -> Term:
        self.skip()
        c = self.peek()
        if c == "[":
            o = self.blank_node_property_list()
        elif c == "(":
            o = self.collection()
        elif self.text.startswith("_:", self.i):
            o = self.blank_label()
        elif self.text.startswith("<<", self.i):
            self.error("RDF-star quoted triples are not supported")
        elif c in "\"'":
            o = self.rdf_literal()
        elif c == "<":
            o = self.iriref()
        elif c and (c in "+-." or c.isdigit()):
            if c == "." and not self.text[self.i + 1:self.i + 2].isdigit():
                self.error("expected object")
            o = self.numeric()
        else:
            m = _BOOLEAN.match(self.text, self.i)
            if m:
                self.i = m.end()
                o = Literal(m.group(1), _XSD_BOOLEAN)
            elif c == ":" or _PN_PREFIX.match(self.text, self.i):
                o = self.iri()
            else:
                self.error("expected object")
        return o

    def blank_node_property_list(self) -> BNode:
        self.expect("[")
        b = self.fresh_bnode()
        self.skip()
        if self.peek() != "]":
            self.predicate_object_list(b)
        self.expect("]")
        return b

    def collection(self):
        self.expect("(")
        items: list[Term] = []
        while True:
            self.skip()
            if self.peek() == ")":
                self.i += 1
                break
            if self.at_end():
                self.error("unterminated collection")
            items.append(self.object_term())
        if not items:
            return _RDF_NIL
        nodes = [self.fresh_bnode() for _ in items]
        for k, (node, item) in enumerate(zip(nodes, items)):
            self.emit(node, _RDF_FIRST, item)
            self.emit(node, _RDF_REST, nodes[k + 1] if k + 1 < len(nodes) else _RDF_NIL)
        return nodes[0]

    def blank_label(self) -> BNode:
        m = _BNODE_LABEL.match(self.text, self.i)
        if not m:
            self.error("malformed blank node label")
        self.i = m.end()
        label = m.group(1)
        if label not in self.bnode_labels:
            self.bnode_labels[label] = self.fresh_bnode()
        return self.bnode_labels[label]

    def iri(self) -> IRI:
        self.skip()
        if self.peek() == "<":
            return self.iriref()
        start = self.i
        m = _PN_PREFIX.match(self.text, self.i)
        name = m.group(0) if m else ""
        j = self.i + len(name)
        if self.text[j:j + 1] != ":":
            self.error("expected IRI or prefixed name")
        if name not in self.prefixes:
            self.error(f"undefined prefix {name!r}", start)
        j += 1
        local = ""
        m = _PN_LOCAL.match(self.text, j)
        if m:
            local = m.group(0)
            while local.endswith(".") and not local.endswith("\\."):
                local = local[:-1]
        self.i = j + len(local)
        local = re.sub(r"\\(.)", r"\1", local)
        return self.absolute(self.prefixes[name] + local, start)

    def iriref(self) -> IRI:
        start = self.i
        if self.peek() != "<":
            self.error("expected '<'")
        out = []
        i = self.i + 1
        text = self.text
        while True:
            if i >= len(text):
                self.error("unterminated IRI", start)
            c = text[i]
            if c == ">":
                break
            if c == "\\":
                if text[i + 1:i + 2] == "u":
                    out.append(self.hex_escape(i + 2, 4))
                    i += 6
                elif text[i + 1:i + 2] == "U":
                    out.append(self.hex_escape(i + 2, 8))
                    i += 10
                else:
                    self.error("invalid escape in IRI", i)
                continue
            if c in '<"{}|^`' or ord(c) <= 0x20:
                self.error("invalid character in IRI", i)
            out.append(c)
            i += 1
        self.i = i + 1
        return self.absolute("".join(out), start)

    def absolute(self, value: str, at: int) -> IRI:
        if re.match(r"[A-Za-z][A-Za-z0-9+.\-]*:", value):
            return IRI(value)
        if self.base is None:
            self.error(f"relative IRI {value!r} without a base IRI", at)
        return IRI(urljoin(self.base, value))

    def hex_escape(self, i: int, n: int) -> str:
        digits = self.text[i:i + n]
        if len(digits) != n or not re.fullmatch(r"[0-9A-Fa-f]+", digits):
            self.error("malformed unicode escape", i)
        return chr(int(digits, 16))

    def rdf_literal(self) -> Literal:
        lexical = self.string()
        m = _LANGTAG.match(self.text, self.i)
        if m:
            self.i = m.end()
            return Literal(lexical, LANG_STRING, m.group(1).lower())
        if self.text.startswith("^^", self.i):
            self.i += 2
            return Literal(lexical, self.iri())
        return Literal(lexical, XSD_STRING)

    def string(self) -> str:
        start = self.i
        text = self.text
        q = text[self.i]
        long = text.startswith(q * 3, self.i)
        i = self.i + (3 if long else 1)
        out = []
        while True:
            if i >= len(text):
                self.error("unterminated string", start)
            c = text[i]
            if long:
                if text.startswith(q * 3, i):
                    i += 3
                    break
            elif c == q:
                i += 1
                break
            elif c in "\r\n":
                self.error("newline in short string", i)
            if c == "\\":
                e = text[i + 1:i + 2]
                if e in _ECHAR:
                    out.append(_ECHAR[e])
                    i += 2
                elif e == "u":
                    out.append(self.hex_escape(i + 2, 4))
                    i += 6
                elif e == "U":
                    out.append(self.hex_escape(i + 2, 8))
                    i += 10
                else:
                    self.error("invalid string escape", i)
                continue
            out.append(c)
            i += 1
        self.i = i
        return "".join(out)

    def numeric(self) -> Literal:
        m = _NUMBER.match(self.text, self.i)
        if not m:
            self.error("malformed number")
        self.i = m.end()
        if m.group("double"):
            return Literal(m.group(0), _XSD_DOUBLE)
        if m.group("decimal"):
            return Literal(m.group(0), _XSD_DECIMAL)
        return Literal(m.group(0), _XSD_INTEGER)


def parse_turtle(document: Union[bytes, str], base: Optional[str] = None,
                 source: Optional[str] = None) -> Graph:
    """Parse a Turtle document into a :class:`Graph`.

    Raises :class:`TurtleSyntaxError` with line/column on malformed input,
    including relative IRIs when no base is known.
    """
    if isinstance(document, bytes):
        try:
            text = document.decode("utf-8")
        except UnicodeDecodeError as e:
            head = document[:e.start]
            line = head.count(b"\n") + 1
            col = e.start - (head.rfind(b"\n") + 1) + 1
            raise TurtleSyntaxError("document is not valid UTF-8", line, col) from None
    else:
        text = document
    if text.startswith("\ufeff"):
        text = text[1:]
    if base is not None:
        base = str(base)
    return _Parser(text, base, source).parse()


def parse_file(path, base: Optional[str] = None, source: Optional[str] = None) -> Graph:
    with open(path, "rb") as fh:
        data = fh.read()
    try:
        return parse_turtle(data, base, source if source is not None else str(path))
    except TurtleSyntaxError as e:
        e.source = str(path)
        raise


# -- writer -------------------------------------------------------------------

def _escape_iri(value: str) -> str:
    out = []
    for c in value:
        if c in '<>"{}|^`\\' or ord(c) <= 0x20:
            out.append(f"\\u{ord(c):04X}" if ord(c) <= 0xFFFF else f"\\U{ord(c):08X}")
        else:
            out.append(c)
    return "<" + "".join(out) + ">"


def _escape_string(value: str) -> str:
    out = []
    for c in value:
        if c == "\\":
            out.append("\\\\")
        elif c == '"':
            out.append('\\"')
        elif c == "\n":
            out.append("\\n")
        elif c == "\r":
            out.append("\\r")
        elif c == "\t":
            out.append("\\t")
        elif ord(c) < 0x20 or 0xD800 <= ord(c) <= 0xDFFF:
            out.append(f"\\u{ord(c):04X}")
        else:
            out.append(c)
    return '"' + "".join(out) + '"'


def format_term(t: Term) -> str:
    if isinstance(t, IRI):
        return _escape_iri(t.value)
    if isinstance(t, BNode):
        return f"_:{t.label}"
    s = _escape_string(t.lexical)
    if t.lang:
        return f"{s}@{t.lang}"
    if t.datatype != XSD_STRING:
        return f"{s}^^{_escape_iri(t.datatype.value)}"
    return s


def serialize_turtle(g: Graph) -> str:
    """Stable Turtle text: prefixes, then subjects and predicates in codepoint order."""
    lines = [f"@prefix {p}: {_escape_iri(ns)} ." for p, ns in sorted(g.prefixes.items())]
    if lines:
        lines.append("")
    by_subject: dict = {}
    for t in g:
        by_subject.setdefault(t.s, {}).setdefault(t.p, []).append(t.o)
    for s in sorted(by_subject, key=term_key):
        preds = by_subject[s]
        parts = []
        for p in sorted(preds, key=lambda x: x.value):
            objs = ", ".join(format_term(o) for o in sorted(preds[p], key=term_key))
            parts.append(f"{format_term(p)} {objs}")
        lines.append(f"{format_term(s)} " + " ;\n    ".join(parts) + " .")
    return "\n".join(lines) + "\n" if lines else ""

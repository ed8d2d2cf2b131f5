"""Lexer and recursive-descent parser for the .otl DSL.

Grammar (terminals quoted; statements end at a newline or ';'):

    model      := { statement }
    statement  := concept | axis | attribute | object | part | relation
                | term | classdef
    concept    := "concept" IDENT [ ":=" [ IDENT "+" ] diffs ]
    diffs      := IDENT { "," IDENT }
    axis       := "axis" IDENT "of" IDENT ["nonexclusive"]
                  "{" IDENT { "," IDENT } "}"
    attribute  := "attribute" IDENT ":" ("text"|"number"|"boolean") "on" IDENT
    object     := "object" IDENT ":" IDENT [ "{" assign { "," assign } "}" ]
    assign     := IDENT "=" (STRING | NUMBER | "true" | "false")
    part       := "part" IDENT "has" IDENT
    relation   := "relation" IDENT "(" RELTYPE ")" IDENT "->" IDENT
    term       := "term" STRING "(" LANG "," STATUS ")" "for" IDENT
                  [ "definition" STRING ]
    classdef   := "class" IDENT ":=" "{" "x" "|" classexpr "}"
    classexpr  := orexpr
    orexpr     := andexpr { "or" andexpr }
    andexpr    := unary { "and" unary }
    unary      := "not" unary | "(" classexpr ")" | atom
    atom       := "in" IDENT | IDENT "=" value | "has" IDENT

A `concept` without the ":=" clause declares a root with an empty intension;
`concept X := a, b` (no "+") declares a root whose intension is exactly the
listed differences.  Differences are declared implicitly: axis members carry
the axis back-reference, any other differentia reference creates a
free-standing difference during validation.

Parsing is total: it never raises on bad input, always returning a
ParseResult whose model is present iff no error diagnostics were produced.
Cross-references are left symbolic; resolution happens in otl.reasoner.
"""

from __future__ import annotations

from dataclasses import dataclass
from decimal import Decimal
from typing import Optional

from .classes import And, AttrEquals, ClassExpression, HasAttr, InConcept, Not, Or
from .model import (
    AssociativeLink,
    Axis,
    AttributeDecl,
    ClassDef,
    Concept,
    Diagnostic,
    Model,
    ObjectInstance,
    OtlError,
    PartLink,
    Severity,
    SourceSpan,
    Term,
    TermStatus,
    Value,
    ValueKind,
    parse_relation_kind,
)

KEYWORDS = frozenset(
    {
        "concept",
        "axis",
        "attribute",
        "object",
        "part",
        "relation",
        "term",
        "class",
        "of",
        "on",
        "has",
        "for",
        "definition",
        "nonexclusive",
        "in",
        "and",
        "or",
        "not",
        "true",
        "false",
    }
)

STATEMENT_KEYWORDS = (
    "concept",
    "axis",
    "attribute",
    "object",
    "part",
    "relation",
    "term",
    "class",
)

_RELTYPE_WORDS = (
    "associative",
    "sequential",
    "temporal",
    "causal",
    "cause_effect",
    "producer_product",
)

_STATUS_WORDS = tuple(s.value for s in TermStatus)

# Nesting bound for class expressions; keeps parsing and evaluation clear of
# the interpreter recursion limit while staying far beyond sane inputs.
MAX_EXPR_DEPTH = 200


@dataclass(frozen=True)
class Token:
    kind: str  # IDENT, KEYWORD, STRING, NUMBER, punctuation kinds, SEP, EOF
    text: str
    line: int
    column: int
    length: int
    value: Optional[Value] = None  # decoded payload for STRING / NUMBER

    def span(self, file: str) -> SourceSpan:
        return SourceSpan(file, self.line, self.column, self.length)


@dataclass
class ParseResult:
    """Outcome of a parse; `model` is present iff there were no errors."""

    model: Optional[Model]
    diagnostics: list[Diagnostic]


class ParseError(OtlError):
    """Raised by parse_class_expr on malformed input."""

    def __init__(self, diagnostic: Diagnostic):
        self.diagnostic = diagnostic
        super().__init__(diagnostic.render())


_PUNCT = {
    ":=": "ASSIGN",
    "->": "ARROW",
    ":": "COLON",
    ",": "COMMA",
    "{": "LBRACE",
    "}": "RBRACE",
    "(": "LPAREN",
    ")": "RPAREN",
    "=": "EQUALS",
    "+": "PLUS",
    "|": "PIPE",
}

_ESCAPES = {'"': '"', "\\": "\\", "n": "\n", "t": "\t"}


def _describe(tok: Token) -> str:
    if tok.kind == "EOF":
        return "end of input"
    if tok.kind == "SEP":
        return "';'" if tok.text == ";" else "end of line"
    return repr(tok.text)


# identifiers and numbers are ASCII-only; str.isdigit()/isalpha() accept
# unicode characters Decimal and the grammar do not
def _is_digit(ch: str) -> bool:
    return "0" <= ch <= "9"


def _is_ident_start(ch: str) -> bool:
    return "a" <= ch <= "z" or "A" <= ch <= "Z"


def _is_ident_char(ch: str) -> bool:
    return _is_ident_start(ch) or _is_digit(ch) or ch == "_"


class _Lexer:
    def __init__(self, source: str, file: str):
        self.source = source
        self.file = file
        self.pos = 0
        self.line = 1
        self.column = 1
        self.depth = 0  # bracket depth; newlines inside brackets do not end statements
        self.tokens: list[Token] = []
        self.diagnostics: list[Diagnostic] = []

    def error(self, message: str, line: int, column: int, length: int = 1) -> None:
        self.diagnostics.append(
            Diagnostic(
                Severity.ERROR,
                "E_LEX",
                message,
                SourceSpan(self.file, line, column, length),
            )
        )

    def emit(self, kind: str, text: str, line: int, column: int, value: Optional[Value] = None) -> None:
        self.tokens.append(Token(kind, text, line, column, max(1, len(text)), value))

    def advance(self, n: int = 1) -> None:
        for _ in range(n):
            if self.pos >= len(self.source):
                return
            if self.source[self.pos] == "\n":
                self.line += 1
                self.column = 1
            else:
                self.column += 1
            self.pos += 1

    def peek(self, offset: int = 0) -> str:
        i = self.pos + offset
        return self.source[i] if i < len(self.source) else ""

    def run(self) -> tuple[list[Token], list[Diagnostic]]:
        src = self.source
        while self.pos < len(src):
            ch = src[self.pos]
            line, col = self.line, self.column
            if ch == "#":
                while self.pos < len(src) and src[self.pos] != "\n":
                    self.advance()
                continue
            if ch == "\n":
                if self.depth == 0:
                    self.emit("SEP", "\n", line, col)
                self.advance()
                continue
            if ch in " \t\r":
                self.advance()
                continue
            if ch == ";":
                self.emit("SEP", ";", line, col)
                self.advance()
                continue
            if ch == '"':
                self._string(line, col)
                continue
            if _is_digit(ch) or (ch == "-" and _is_digit(self.peek(1))):
                self._number(line, col)
                continue
            if _is_ident_start(ch):
                self._ident(line, col)
                continue
            two = src[self.pos : self.pos + 2]
            if two in _PUNCT:
                self.emit(_PUNCT[two], two, line, col)
                self.advance(2)
                continue
            if ch in _PUNCT:
                if ch in "({":
                    self.depth += 1
                elif ch in ")}":
                    self.depth = max(0, self.depth - 1)
                self.emit(_PUNCT[ch], ch, line, col)
                self.advance()
                continue
            self.error(f"unexpected character {ch!r}", line, col)
            self.advance()
        self.tokens.append(Token("EOF", "", self.line, self.column, 0))
        return self.tokens, self.diagnostics

    def _string(self, line: int, col: int) -> None:
        self.advance()  # opening quote
        chars: list[str] = []
        raw_len = 1
        while True:
            ch = self.peek()
            if ch == "" or ch == "\n":
                self.error("unterminated string literal", line, col, raw_len)
                break
            raw_len += 1
            if ch == '"':
                self.advance()
                self.emit("STRING", self.source_slice(raw_len), line, col, "".join(chars))
                return
            if ch == "\\":
                esc = self.peek(1)
                if esc in _ESCAPES:
                    chars.append(_ESCAPES[esc])
                    self.advance(2)
                    raw_len += 1
                else:
                    self.error(f"unknown escape '\\{esc}'", self.line, self.column, 2)
                    self.advance(2)
                    raw_len += 1
                continue
            chars.append(ch)
            self.advance()
        # unterminated: still emit what we saw so the parser can continue
        self.emit("STRING", "".join(chars), line, col, "".join(chars))

    def source_slice(self, length: int) -> str:
        return self.source[self.pos - length : self.pos]

    def _number(self, line: int, col: int) -> None:
        start = self.pos
        if self.peek() == "-":
            self.advance()
        while _is_digit(self.peek()):
            self.advance()
        if self.peek() == "." and _is_digit(self.peek(1)):
            self.advance()
            while _is_digit(self.peek()):
                self.advance()
        text = self.source[start : self.pos]
        self.emit("NUMBER", text, line, col, Decimal(text))

    def _ident(self, line: int, col: int) -> None:
        start = self.pos
        while _is_ident_char(self.peek()):
            self.advance()
        text = self.source[start : self.pos]
        kind = "KEYWORD" if text in KEYWORDS else "IDENT"
        self.emit(kind, text, line, col)


class _Parser:
    def __init__(self, tokens: list[Token], file: str):
        self.tokens = tokens
        self.file = file
        self.pos = 0
        self.diagnostics: list[Diagnostic] = []
        self.model = Model()
        # duplicate tracking: (kind, id) -> first declaration span
        self.declared: dict[tuple[str, str], SourceSpan] = {}
        # difference id -> owning axis id (a difference belongs to one axis)
        self.diff_owner: dict[str, str] = {}
        self.term_triples: set[tuple[str, str, str]] = set()

    # -- token plumbing ----------------------------------------------------

    def peek(self, offset: int = 0) -> Token:
        i = min(self.pos + offset, len(self.tokens) - 1)
        return self.tokens[i]

    def next(self) -> Token:
        tok = self.peek()
        if tok.kind != "EOF":
            self.pos += 1
        return tok

    def at(self, kind: str, text: Optional[str] = None) -> bool:
        tok = self.peek()
        return tok.kind == kind and (text is None or tok.text == text)

    def error(self, message: str, tok: Token, code: str = "E_SYN") -> None:
        self.diagnostics.append(
            Diagnostic(Severity.ERROR, code, message, tok.span(self.file))
        )

    def expect(self, kind: str, expected: str, text: Optional[str] = None) -> Optional[Token]:
        tok = self.peek()
        if tok.kind == kind and (text is None or tok.text == text):
            return self.next()
        self.error(f"expected {expected}, found {_describe(tok)}", tok)
        return None

    def expect_ident(self, expected: str) -> Optional[Token]:
        return self.expect("IDENT", expected)

    def recover(self) -> None:
        """Skip to the next statement boundary after a syntax error."""
        if self.peek().kind not in ("SEP", "EOF"):
            self.next()
        while self.peek().kind not in ("SEP", "EOF"):
            self.next()

    def end_statement(self) -> None:
        tok = self.peek()
        if tok.kind in ("SEP", "EOF"):
            return
        self.error(f"expected end of statement, found {_describe(tok)}", tok)
        self.recover()

    def declare(self, kind: str, name: str, tok: Token) -> bool:
        """Record a declaration; returns False (and diagnoses) on duplicates."""
        key = (kind, name)
        prior = self.declared.get(key)
        if prior is not None:
            self.error(
                f"{kind} '{name}' already declared at {prior.line}:{prior.column}",
                tok,
                code="E_DUP_DECL",
            )
            return False
        self.declared[key] = tok.span(self.file)
        return True

    def note_span(self, kind: str, entity_id: str, tok: Token) -> None:
        self.model.spans[(kind, entity_id)] = tok.span(self.file)

    # -- statements --------------------------------------------------------

    def run(self) -> ParseResult:
        while True:
            while self.at("SEP"):
                self.next()
            if self.at("EOF"):
                break
            tok = self.peek()
            if tok.kind == "KEYWORD" and tok.text in STATEMENT_KEYWORDS:
                handler = getattr(self, f"_stmt_{tok.text}")
                handler()
                self.end_statement()
            else:
                expected = ", ".join(STATEMENT_KEYWORDS)
                self.error(f"expected one of {expected}, found {_describe(tok)}", tok)
                self.recover()
        model = None if any(d.is_error for d in self.diagnostics) else self.model
        return ParseResult(model, self.diagnostics)

    def _ident_list(self, expected: str) -> Optional[list[Token]]:
        first = self.expect_ident(expected)
        if first is None:
            return None
        items = [first]
        while self.at("COMMA"):
            self.next()
            nxt = self.expect_ident(expected)
            if nxt is None:
                return None
            items.append(nxt)
        return items

    def _stmt_concept(self) -> None:
        self.next()  # 'concept'
        name = self.expect_ident("concept identifier")
        if name is None:
            return self.recover()
        genus: Optional[str] = None
        differentiae: list[str] = []
        if self.at("ASSIGN"):
            self.next()
            first = self.expect_ident("genus or difference identifier")
            if first is None:
                return self.recover()
            if self.at("PLUS"):
                self.next()
                genus = first.text
                diffs = self._ident_list("difference identifier")
                if diffs is None:
                    return self.recover()
            else:
                diffs = [first]
                while self.at("COMMA"):
                    self.next()
                    nxt = self.expect_ident("difference identifier")
                    if nxt is None:
                        return self.recover()
                    diffs.append(nxt)
            for tok in diffs:
                if tok.text in differentiae:
                    self.error(
                        f"duplicate differentia '{tok.text}'", tok, code="E_DUP_DECL"
                    )
                else:
                    differentiae.append(tok.text)
        if not self.declare("concept", name.text, name):
            return
        self.model.concepts[name.text] = Concept(
            name.text, name.text, genus, tuple(differentiae)
        )
        self.note_span("concept", name.text, name)

    def _stmt_axis(self) -> None:
        self.next()  # 'axis'
        name = self.expect_ident("axis identifier")
        if name is None:
            return self.recover()
        if self.expect("KEYWORD", "'of'", "of") is None:
            return self.recover()
        scope = self.expect_ident("concept identifier")
        if scope is None:
            return self.recover()
        exclusive = True
        if self.at("KEYWORD", "nonexclusive"):
            self.next()
            exclusive = False
        if self.expect("LBRACE", "'{'") is None:
            return self.recover()
        members = self._ident_list("difference identifier")
        if members is None:
            return self.recover()
        if self.expect("RBRACE", "'}'") is None:
            return self.recover()
        if not self.declare("axis", name.text, name):
            return
        member_ids: list[str] = []
        for tok in members:
            if tok.text in member_ids:
                self.error(f"duplicate member '{tok.text}'", tok, code="E_DUP_DECL")
                continue
            owner = self.diff_owner.get(tok.text)
            if owner is not None:
                self.error(
                    f"difference '{tok.text}' already belongs to axis '{owner}'",
                    tok,
                    code="E_DUP_DECL",
                )
                continue
            self.diff_owner[tok.text] = name.text
            member_ids.append(tok.text)
        self.model.axes[name.text] = Axis(
            name.text, name.text, scope.text, tuple(member_ids), exclusive
        )
        self.note_span("axis", name.text, name)

    def _stmt_attribute(self) -> None:
        self.next()  # 'attribute'
        name = self.expect_ident("attribute identifier")
        if name is None:
            return self.recover()
        if self.expect("COLON", "':'") is None:
            return self.recover()
        kind_tok = self.peek()
        if kind_tok.kind == "IDENT" and kind_tok.text in ("text", "number", "boolean"):
            self.next()
        else:
            self.error(
                f"expected one of text, number, boolean, found {kind_tok.text!r}",
                kind_tok,
            )
            return self.recover()
        if self.expect("KEYWORD", "'on'", "on") is None:
            return self.recover()
        domain = self.expect_ident("concept identifier")
        if domain is None:
            return self.recover()
        if not self.declare("attribute", name.text, name):
            return
        self.model.attributes[name.text] = AttributeDecl(
            name.text, name.text, domain.text, ValueKind(kind_tok.text)
        )
        self.note_span("attribute", name.text, name)

    def _value(self) -> Optional[tuple[Value, Token]]:
        tok = self.peek()
        if tok.kind in ("STRING", "NUMBER"):
            self.next()
            assert tok.value is not None
            return tok.value, tok
        if tok.kind == "KEYWORD" and tok.text in ("true", "false"):
            self.next()
            return tok.text == "true", tok
        self.error(
            f"expected string, number, true or false, found {_describe(tok)}", tok
        )
        return None

    def _stmt_object(self) -> None:
        self.next()  # 'object'
        name = self.expect_ident("object identifier")
        if name is None:
            return self.recover()
        if self.expect("COLON", "':'") is None:
            return self.recover()
        concept = self.expect_ident("concept identifier")
        if concept is None:
            return self.recover()
        values: dict[str, Value] = {}
        value_spans: list[tuple[str, Token]] = []
        if self.at("LBRACE"):
            self.next()
            while True:
                attr = self.expect_ident("attribute identifier")
                if attr is None:
                    return self.recover()
                if self.expect("EQUALS", "'='") is None:
                    return self.recover()
                val = self._value()
                if val is None:
                    return self.recover()
                if attr.text in values:
                    self.error(
                        f"duplicate value for attribute '{attr.text}'",
                        attr,
                        code="E_DUP_DECL",
                    )
                else:
                    values[attr.text] = val[0]
                    value_spans.append((attr.text, attr))
                if self.at("COMMA"):
                    self.next()
                    continue
                break
            if self.expect("RBRACE", "'}'") is None:
                return self.recover()
        if not self.declare("object", name.text, name):
            return
        self.model.objects[name.text] = ObjectInstance(
            name.text, name.text, concept.text, values
        )
        self.note_span("object", name.text, name)
        for attr_id, tok in value_spans:
            self.note_span("value", f"{name.text}.{attr_id}", tok)

    def _stmt_part(self) -> None:
        kw = self.next()  # 'part'
        whole = self.expect_ident("concept identifier")
        if whole is None:
            return self.recover()
        if self.expect("KEYWORD", "'has'", "has") is None:
            return self.recover()
        part = self.expect_ident("concept identifier")
        if part is None:
            return self.recover()
        index = len(self.model.parts)
        self.model.parts.append(PartLink(whole.text, part.text))
        self.note_span("part", str(index), kw)

    def _stmt_relation(self) -> None:
        kw = self.next()  # 'relation'
        # Links are anonymous in the model; the name is required by the
        # syntax but only aids readability of the source.
        if self.expect_ident("relation identifier") is None:
            return self.recover()
        if self.expect("LPAREN", "'('") is None:
            return self.recover()
        rel = self.peek()
        if rel.kind == "IDENT" and rel.text in _RELTYPE_WORDS:
            self.next()
        else:
            expected = ", ".join(_RELTYPE_WORDS)
            self.error(f"expected one of {expected}, found {rel.text!r}", rel)
            return self.recover()
        if self.expect("RPAREN", "')'") is None:
            return self.recover()
        source = self.expect_ident("concept identifier")
        if source is None:
            return self.recover()
        if self.expect("ARROW", "'->'") is None:
            return self.recover()
        target = self.expect_ident("concept identifier")
        if target is None:
            return self.recover()
        index = len(self.model.relations)
        self.model.relations.append(
            AssociativeLink(parse_relation_kind(rel.text), source.text, target.text)
        )
        self.note_span("relation", str(index), kw)

    def _stmt_term(self) -> None:
        self.next()  # 'term'
        designation = self.expect("STRING", "term designation string")
        if designation is None:
            return self.recover()
        if self.expect("LPAREN", "'('") is None:
            return self.recover()
        lang = self.expect_ident("language tag")
        if lang is None:
            return self.recover()
        if self.expect("COMMA", "','") is None:
            return self.recover()
        status_tok = self.peek()
        if status_tok.kind == "IDENT" and status_tok.text in _STATUS_WORDS:
            self.next()
        else:
            expected = ", ".join(_STATUS_WORDS)
            self.error(f"expected one of {expected}, found {status_tok.text!r}", status_tok)
            return self.recover()
        if self.expect("RPAREN", "')'") is None:
            return self.recover()
        if self.expect("KEYWORD", "'for'", "for") is None:
            return self.recover()
        concept = self.expect_ident("concept identifier")
        if concept is None:
            return self.recover()
        nl_definition: Optional[str] = None
        if self.at("KEYWORD", "definition"):
            self.next()
            text = self.expect("STRING", "definition string")
            if text is None:
                return self.recover()
            nl_definition = str(text.value)
        triple = (str(designation.value), lang.text, concept.text)
        if triple in self.term_triples:
            self.error(
                f"term {designation.value!r} ({lang.text}) for '{concept.text}' already declared",
                designation,
                code="E_DUP_DECL",
            )
            return
        self.term_triples.add(triple)
        index = len(self.model.terms)
        self.model.terms.append(
            Term(
                str(designation.value),
                lang.text,
                TermStatus(status_tok.text),
                concept.text,
                nl_definition,
            )
        )
        self.note_span("term", str(index), designation)

    def _stmt_class(self) -> None:
        self.next()  # 'class'
        name = self.expect_ident("class identifier")
        if name is None:
            return self.recover()
        if self.expect("ASSIGN", "':='") is None:
            return self.recover()
        if self.expect("LBRACE", "'{'") is None:
            return self.recover()
        if self.expect("IDENT", "'x'", "x") is None:
            return self.recover()
        if self.expect("PIPE", "'|'") is None:
            return self.recover()
        expr = self._class_expr(0)
        if expr is None:
            return self.recover()
        if self.expect("RBRACE", "'}'") is None:
            return self.recover()
        if not self.declare("class", name.text, name):
            return
        self.model.classes[name.text] = ClassDef(name.text, expr)
        self.note_span("class", name.text, name)

    # -- class expressions ---------------------------------------------------

    def _class_expr(self, depth: int) -> Optional[ClassExpression]:
        if depth > MAX_EXPR_DEPTH:
            self.error("class expression too deeply nested", self.peek())
            return None
        left = self._and_expr(depth)
        if left is None:
            return None
        children = [left]
        while self.at("KEYWORD", "or"):
            self.next()
            nxt = self._and_expr(depth)
            if nxt is None:
                return None
            children.append(nxt)
        return children[0] if len(children) == 1 else Or(tuple(children))

    def _and_expr(self, depth: int) -> Optional[ClassExpression]:
        left = self._unary(depth)
        if left is None:
            return None
        children = [left]
        while self.at("KEYWORD", "and"):
            self.next()
            nxt = self._unary(depth)
            if nxt is None:
                return None
            children.append(nxt)
        return children[0] if len(children) == 1 else And(tuple(children))

    def _unary(self, depth: int) -> Optional[ClassExpression]:
        # leading 'not's are counted iteratively so pathological chains can't
        # exhaust the interpreter stack
        negations = 0
        while self.at("KEYWORD", "not"):
            self.next()
            negations += 1
        if self.at("LPAREN"):
            self.next()
            inner = self._class_expr(depth + 1)
            if inner is None:
                return None
            if self.expect("RPAREN", "')'") is None:
                return None
            expr = inner
        else:
            atom = self._atom()
            if atom is None:
                return None
            expr = atom
        for _ in range(negations):
            expr = Not(expr)
        return expr

    def _atom(self) -> Optional[ClassExpression]:
        tok = self.peek()
        if tok.kind == "KEYWORD" and tok.text == "in":
            self.next()
            concept = self.expect_ident("concept identifier")
            if concept is None:
                return None
            return InConcept(concept.text)
        if tok.kind == "KEYWORD" and tok.text == "has":
            self.next()
            attr = self.expect_ident("attribute identifier")
            if attr is None:
                return None
            return HasAttr(attr.text)
        if tok.kind == "IDENT":
            self.next()
            if self.expect("EQUALS", "'='") is None:
                return None
            val = self._value()
            if val is None:
                return None
            return AttrEquals(tok.text, val[0])
        self.error(
            f"expected 'in', 'has', attribute comparison, 'not' or '(', "
            f"found {_describe(tok)}",
            tok,
        )
        return None


def parse(source: str, file_name: str = "<input>") -> ParseResult:
    """Parse DSL source into an unvalidated model.

    Never raises; lexical and syntactic problems are reported as diagnostics
    and the parser resynchronizes at the next statement boundary.
    """
    tokens, lex_diags = _Lexer(source, file_name).run()
    parser = _Parser(tokens, file_name)
    result = parser.run()
    diagnostics = sorted(
        lex_diags + result.diagnostics,
        key=lambda d: (d.location.line, d.location.column, d.code)
        if isinstance(d.location, SourceSpan)
        else (0, 0, d.code),
    )
    if any(d.is_error for d in diagnostics):
        return ParseResult(None, diagnostics)
    return ParseResult(result.model, diagnostics)


def parse_class_expr(source: str, file_name: str = "<expr>") -> ClassExpression:
    """Parse a standalone class expression, raising ParseError on bad input."""
    tokens, lex_diags = _Lexer(source, file_name).run()
    if lex_diags:
        raise ParseError(lex_diags[0])
    parser = _Parser(tokens, file_name)
    expr = parser._class_expr(0)
    if expr is None or parser.diagnostics:
        diag = parser.diagnostics[0] if parser.diagnostics else Diagnostic(
            Severity.ERROR, "E_SYN", "empty class expression", SourceSpan(file_name, 1, 1)
        )
        raise ParseError(diag)
    while parser.at("SEP"):
        parser.next()
    trailing = parser.peek()
    if trailing.kind != "EOF":
        raise ParseError(
            Diagnostic(
                Severity.ERROR,
                "E_SYN",
                f"unexpected trailing input {trailing.text!r}",
                trailing.span(file_name),
            )
        )
    return expr

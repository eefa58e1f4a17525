"""Lexer and recursive-descent parser for the architecture description text.

Syntax errors never abort the parse.  The parser reports one ``E-SYNTAX``
diagnostic, drops the broken top-level declaration and resumes at the next
top-level keyword found outside any open brace.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from ..diagnostics import Diagnostic, Severity, SourceLocation
from ..metamodel import ViewFnCategory
from .ast import TOP_LEVEL, Decl, ModelAst, Ref

IDENT_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")

AGENTS = ("user", "system", "external")
CATEGORIES = tuple(c.value for c in ViewFnCategory)


@dataclass(frozen=True)
class Token:
    kind: str  # IDENT, STRING, "{", "}", ",", "->", EOF, ERROR
    value: str
    location: SourceLocation

    def describe(self) -> str:
        if self.kind == "EOF":
            return "end of file"
        if self.kind == "STRING":
            return "string"
        if self.kind == "ERROR":
            return self.value
        return repr(self.value)


def tokenize(text: str, source_name: str) -> list[Token]:
    tokens: list[Token] = []
    pos = 0
    line = 1
    line_start = 0
    n = len(text)

    def loc(at: int) -> SourceLocation:
        return SourceLocation(source_name, line, at - line_start + 1)

    while pos < n:
        ch = text[pos]
        if ch == "\n":
            pos += 1
            line += 1
            line_start = pos
            continue
        if ch in " \t\r\f\v":
            pos += 1
            continue
        if ch == "#":
            end = text.find("\n", pos)
            pos = n if end < 0 else end
            continue
        if ch in "{},":
            tokens.append(Token(ch, ch, loc(pos)))
            pos += 1
            continue
        if text.startswith("->", pos):
            tokens.append(Token("->", "->", loc(pos)))
            pos += 2
            continue
        if ch == '"':
            start = pos
            pos += 1
            chars = []
            closed = False
            while pos < n:
                c = text[pos]
                if c == "\\" and pos + 1 < n and text[pos + 1] in '"\\':
                    chars.append(text[pos + 1])
                    pos += 2
                elif c == '"':
                    pos += 1
                    closed = True
                    break
                elif c == "\n":
                    break
                else:
                    chars.append(c)
                    pos += 1
            if closed:
                tokens.append(Token("STRING", "".join(chars), loc(start)))
            else:
                tokens.append(Token("ERROR", "unterminated string", loc(start)))
            continue
        m = IDENT_RE.match(text, pos)
        if m:
            tokens.append(Token("IDENT", m.group(), loc(pos)))
            pos = m.end()
            continue
        tokens.append(Token("ERROR", f"unexpected character {ch!r}", loc(pos)))
        pos += 1
    tokens.append(Token("EOF", "", loc(pos)))
    return tokens


class ParseError(Exception):
    def __init__(self, token: Token, message: str):
        super().__init__(message)
        self.token = token


class Parser:
    def __init__(self, tokens: list[Token], source_name: str):
        self.tokens = tokens
        self.source_name = source_name
        self.pos = 0
        self.depth = 0
        self.diagnostics: list[Diagnostic] = []

    # -- token helpers -------------------------------------------------

    @property
    def tok(self) -> Token:
        return self.tokens[self.pos]

    def advance(self) -> Token:
        token = self.tokens[self.pos]
        if token.kind != "EOF":
            self.pos += 1
        return token

    def error(self, message: str, token: Token | None = None) -> ParseError:
        token = token or self.tok
        if token.kind == "ERROR":
            message = token.value
        return ParseError(token, message)

    def at_word(self, *words: str) -> bool:
        return self.tok.kind == "IDENT" and self.tok.value in words

    def expect_word(self, word: str) -> Token:
        if not self.at_word(word):
            raise self.error(f"expected '{word}', found {self.tok.describe()}")
        return self.advance()

    def expect(self, kind: str, what: str) -> Token:
        if self.tok.kind != kind:
            raise self.error(f"expected {what}, found {self.tok.describe()}")
        return self.advance()

    def ident(self) -> Token:
        return self.expect("IDENT", "identifier")

    def string(self) -> str:
        return self.expect("STRING", "quoted string").value

    def ref_list(self) -> list[Ref]:
        tok = self.ident()
        refs = [Ref(tok.value, tok.location)]
        while self.tok.kind == ",":
            self.advance()
            tok = self.ident()
            refs.append(Ref(tok.value, tok.location))
        return refs

    # -- top level -----------------------------------------------------

    def parse(self) -> ModelAst:
        ast = ModelAst(self.source_name)
        while self.tok.kind != "EOF":
            start = self.pos
            try:
                if not self.at_word(*TOP_LEVEL):
                    raise self.error(f"expected a top-level declaration, found {self.tok.describe()}")
                ast.declarations.append(self.top_level())
            except ParseError as exc:
                self.diagnostics.append(Diagnostic(
                    "E-SYNTAX", Severity.ERROR, (), str(exc), exc.token.location))
                self.recover(start)
        return ast

    def recover(self, start: int) -> None:
        """Skip to the next top-level keyword at brace depth zero."""
        self.pos = max(self.pos, start + 1)
        if self.pos >= len(self.tokens):
            self.pos = len(self.tokens) - 1
        # Recount open braces from the start of the failed declaration.
        depth = 0
        for token in self.tokens[start:self.pos]:
            if token.kind == "{":
                depth += 1
            elif token.kind == "}":
                depth = max(depth - 1, 0)
        while self.tok.kind != "EOF":
            if depth == 0 and self.at_word(*TOP_LEVEL):
                break
            if self.tok.kind == "{":
                depth += 1
            elif self.tok.kind == "}":
                depth = max(depth - 1, 0)
            self.advance()
        self.depth = 0

    def top_level(self) -> Decl:
        word = self.tok.value
        if word == "bind":
            return self.bind()
        if word == "process":
            return self.block(self.process_item)
        if word == "dialog":
            return self.block(self.dialog_item)
        if word in ("component", "external_system"):
            return self.block(self.component_item)
        if word == "class":
            return self.class_block()
        return self.block(self.node_item)

    def bind(self) -> Decl:
        kw = self.advance()
        src = self.ident()
        self.expect("->", "'->'")
        refs = [Ref(src.value, src.location)] + self.ref_list()
        return Decl("bind", kw.location, refs=refs)

    # -- blocks --------------------------------------------------------

    def header(self, named: bool = True) -> Decl:
        kw = self.advance()
        name = self.string() if named or self.tok.kind == "STRING" else None
        self.expect_word("as")
        ident = self.ident()
        return Decl(kw.value, kw.location, name=name, id=ident.value,
                    id_location=ident.location)

    def body(self, decl: Decl, item) -> Decl:
        # Bodies are optional: `operation "X" as O2` is a complete block.
        if self.tok.kind != "{":
            return decl
        self.advance()
        self.depth += 1
        while self.tok.kind != "}":
            if self.tok.kind == "EOF":
                raise self.error(f"unterminated {decl.keyword} block {decl.id}")
            item(decl)
        self.advance()
        self.depth -= 1
        return decl

    def block(self, item) -> Decl:
        return self.body(self.header(), item)

    def unexpected(self, where: str) -> ParseError:
        return self.error(f"unexpected {self.tok.describe()} in {where} body")

    def process_item(self, parent: Decl) -> None:
        if not self.at_word("function"):
            raise self.unexpected(parent.keyword)
        parent.children.append(self.block(self.function_item))

    def function_item(self, parent: Decl) -> None:
        if self.at_word("function"):
            parent.children.append(self.block(self.function_item))
        elif self.at_word("operation"):
            decl = self.header()
            if self.at_word("automated"):
                self.advance()
                decl.flags = ("automated",)
            parent.children.append(self.body(decl, self.operation_item))
        else:
            raise self.unexpected("function")

    def operation_item(self, parent: Decl) -> None:
        if self.at_word("performer"):
            kw = self.advance()
            parent.children.append(Decl("performer", kw.location, value=self.string()))
        elif self.at_word("service"):
            if any(child.keyword == "service" for child in parent.children):
                raise self.error(f"operation {parent.id} already has a service")
            parent.children.append(self.body(self.header(named=False), self.service_item))
        else:
            raise self.unexpected("operation")

    def service_item(self, parent: Decl) -> None:
        if not self.at_word("auto_fn"):
            raise self.unexpected("service")
        parent.children.append(self.entry())

    def entry(self) -> Decl:
        """``<keyword> "<name>" as <ID>``"""
        return self.header()

    def dialog_item(self, parent: Decl) -> None:
        tok = self.tok
        if self.at_word("implements"):
            self.advance()
            parent.children.append(Decl("implements", tok.location, refs=self.ref_list()))
        elif self.at_word("agent"):
            self.advance()
            value = self.ident()
            if value.value not in AGENTS:
                raise self.error(f"agent must be one of {', '.join(AGENTS)}", value)
            parent.children.append(Decl("agent", tok.location, value=value.value))
        elif self.at_word("input", "output"):
            self.advance()
            self.expect_word("resource" if tok.value == "input" else "product")
            name = self.string()
            self.expect_word("as")
            ident = self.ident()
            parent.children.append(Decl(tok.value, tok.location, name=name, id=ident.value,
                                        id_location=ident.location))
        elif self.at_word("form"):
            self.advance()
            decl = Decl("form", tok.location, name=self.string())
            if self.at_word("as"):
                self.advance()
                ident = self.ident()
                decl.id, decl.id_location = ident.value, ident.location
            parent.children.append(decl)
        elif self.at_word("view_fn"):
            decl = self.entry()
            self.expect_word("category")
            value = self.ident()
            if value.value not in CATEGORIES:
                raise self.error(f"category must be one of {', '.join(CATEGORIES)}", value)
            decl.value = value.value
            parent.children.append(decl)
        else:
            raise self.unexpected("dialog")

    def component_item(self, parent: Decl) -> None:
        if not self.at_word("module"):
            raise self.unexpected(parent.keyword)
        parent.children.append(self.entry())

    def class_block(self) -> Decl:
        decl = self.header()
        if self.at_word("hosted_by"):
            kw = self.advance()
            host = self.ident()
            decl.children.append(Decl("hosted_by", kw.location, refs=[Ref(host.value, host.location)]))
        return self.body(decl, self.class_item)

    def class_item(self, parent: Decl) -> None:
        if not self.at_word("method"):
            raise self.unexpected("class")
        parent.children.append(self.entry())

    def node_item(self, parent: Decl) -> None:
        tok = self.tok
        if self.at_word("requirements"):
            self.advance()
            parent.children.append(Decl("requirements", tok.location, value=self.string()))
        elif self.at_word("deploys"):
            self.advance()
            parent.children.append(Decl("deploys", tok.location, refs=self.ref_list()))
        else:
            raise self.unexpected("node")


def parse(text: str | bytes, source_name: str = "<input>") -> tuple[ModelAst, list[Diagnostic]]:
    """Parse ADL text into a :class:`ModelAst` plus diagnostics.

    ``bytes`` input is decoded as UTF-8; undecodable input yields an empty
    AST and a single ``E-ENCODING`` diagnostic.
    """
    if isinstance(text, (bytes, bytearray)):
        try:
            text = bytes(text).decode("utf-8")
        except UnicodeDecodeError as exc:
            prefix = bytes(text)[:exc.start]
            line = prefix.count(b"\n") + 1
            column = exc.start - (prefix.rfind(b"\n") + 1) + 1
            return ModelAst(source_name), [Diagnostic(
                "E-ENCODING", Severity.ERROR, (),
                f"invalid UTF-8 at byte offset {exc.start}",
                SourceLocation(source_name, line, column))]
    parser = Parser(tokenize(text, source_name), source_name)
    ast = parser.parse()
    return ast, parser.diagnostics

"""Recursive-descent helpers shared by the DSL parsers."""

from __future__ import annotations

from .diagnostics import Diagnostic, SourceSpan, error
from .lexer import LexError, Token, tokenize


class ParseError(Exception):
    """Aborts a parse; carries the diagnostic to report."""

    def __init__(self, diagnostic: Diagnostic):
        super().__init__(diagnostic.message)
        self.diagnostic = diagnostic


class TokenStream:
    def __init__(self, text: str, file: str):
        try:
            self.tokens = tokenize(text, file)
        except LexError as e:
            raise ParseError(error("E_SYNTAX", e.message, e.span)) from e
        self.file = file
        self.pos = 0

    def peek(self) -> Token:
        return self.tokens[self.pos]

    def at_keyword(self, word: str) -> bool:
        t = self.peek()
        return t.kind == "ident" and t.value == word

    def at_punct(self, p: str) -> bool:
        t = self.peek()
        return t.kind == "punct" and t.value == p

    def advance(self) -> Token:
        t = self.tokens[self.pos]
        if t.kind != "eof":
            self.pos += 1
        return t

    def span(self, tok: Token) -> SourceSpan:
        return tok.span(self.file)

    def fail(self, message: str, tok: Token | None = None):
        tok = tok or self.peek()
        raise ParseError(error("E_SYNTAX", message, self.span(tok)))

    def expect_keyword(self, word: str) -> Token:
        if not self.at_keyword(word):
            self.fail(f"expected '{word}', found {self._describe()}")
        return self.advance()

    def expect_punct(self, p: str) -> Token:
        if not self.at_punct(p):
            self.fail(f"expected '{p}', found {self._describe()}")
        return self.advance()

    def expect_ident(self, what: str = "identifier") -> Token:
        t = self.peek()
        if t.kind != "ident":
            self.fail(f"expected {what}, found {self._describe()}")
        return self.advance()

    def expect_string(self, what: str = "string literal") -> Token:
        t = self.peek()
        if t.kind != "string":
            self.fail(f"expected {what}, found {self._describe()}")
        return self.advance()

    def expect_eof(self):
        if self.peek().kind != "eof":
            self.fail(f"unexpected trailing input: {self._describe()}")

    def _describe(self) -> str:
        t = self.peek()
        if t.kind == "eof":
            return "end of input"
        if t.kind == "string":
            return f'string "{t.value}"'
        return f"'{t.value}'"

"""Shared tokenizer for the three textual notations.

All notations use the same lexical rules: `//` line comments,
whitespace-insensitive, identifiers `[A-Za-z_][A-Za-z0-9_]*`, double-quoted
strings with `\\"` and `\\\\` escapes, and a small fixed punctuation set.
"""

from __future__ import annotations

from dataclasses import dataclass

from .diagnostics import SourceSpan

PUNCT = ("->", "{", "}", "(", ")", ",", "=", "|", "&", "!")

IDENT_START = set("abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ_")
IDENT_CONT = IDENT_START | set("0123456789")


class LexError(Exception):
    def __init__(self, message: str, span: SourceSpan):
        super().__init__(message)
        self.message = message
        self.span = span


@dataclass(frozen=True)
class Token:
    kind: str  # "ident" | "string" | "punct" | "eof"
    value: str
    line: int
    col: int

    def span(self, file: str) -> SourceSpan:
        width = max(len(self.value), 1)
        return SourceSpan(file, self.line, self.col, self.line, self.col + width - 1)


def tokenize(text: str, file: str) -> list[Token]:
    tokens: list[Token] = []
    i, line, col = 0, 1, 1
    n = len(text)
    while i < n:
        c = text[i]
        if c == "\n":
            i, line, col = i + 1, line + 1, 1
            continue
        if c in " \t\r":
            i, col = i + 1, col + 1
            continue
        if text.startswith("//", i):
            while i < n and text[i] != "\n":
                i += 1
            continue
        if c in IDENT_START:
            start_col = i
            j = i
            while j < n and text[j] in IDENT_CONT:
                j += 1
            tokens.append(Token("ident", text[i:j], line, col))
            col += j - i
            i = j
            continue
        if c == '"':
            start_line, start_col = line, col
            j = i + 1
            buf = []
            while True:
                if j >= n or text[j] == "\n":
                    raise LexError(
                        "unterminated string literal",
                        SourceSpan.point(file, start_line, start_col),
                    )
                if text[j] == "\\":
                    if j + 1 < n and text[j + 1] in ('"', "\\"):
                        buf.append(text[j + 1])
                        j += 2
                        continue
                    raise LexError(
                        "invalid escape in string literal",
                        SourceSpan.point(file, line, start_col + (j - i)),
                    )
                if text[j] == '"':
                    break
                buf.append(text[j])
                j += 1
            tokens.append(Token("string", "".join(buf), start_line, start_col))
            col += j + 1 - i
            i = j + 1
            continue
        for p in PUNCT:
            if text.startswith(p, i):
                tokens.append(Token("punct", p, line, col))
                i += len(p)
                col += len(p)
                break
        else:
            raise LexError(
                f"unexpected character {c!r}", SourceSpan.point(file, line, col)
            )
    tokens.append(Token("eof", "", line, col))
    return tokens


def escape_string(value: str) -> str:
    """Render a string token back to source form."""
    return '"' + value.replace("\\", "\\\\").replace('"', '\\"') + '"'

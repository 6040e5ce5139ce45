"""Tokenizer shared by the propositional and QDDC parsers."""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Optional

from qddc_shield_synth.errors import QddcSyntaxError

# Longest operators first.
OPERATORS = (
    "<=>", "[[", "]]", "[]", "<>", "&&", "||", "=>", "<=", ">=",
    "<", ">", "=", "[", "]", "(", ")", "!", "^", ".", ",",
)
IDENT_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*'*")
NUMBER_RE = re.compile(r"[0-9]+")


@dataclass(frozen=True)
class Token:
    kind: str  # "ident", "number", "op" or "eof"
    text: str
    line: int
    column: int

    def is_op(self, text: str) -> bool:
        return self.kind == "op" and self.text == text


def tokenize(text: str) -> list[Token]:
    tokens: list[Token] = []
    line, column, i = 1, 1, 0
    while i < len(text):
        ch = text[i]
        if ch == "\n":
            line, column, i = line + 1, 1, i + 1
            continue
        if ch.isspace():
            column, i = column + 1, i + 1
            continue
        if text.startswith("//", i):
            while i < len(text) and text[i] != "\n":
                i += 1
            continue

        match = IDENT_RE.match(text, i) or NUMBER_RE.match(text, i)
        if match:
            kind = "number" if match.re is NUMBER_RE else "ident"
            tokens.append(Token(kind, match.group(), line, column))
            column += match.end() - i
            i = match.end()
            continue

        op = next((o for o in OPERATORS if text.startswith(o, i)), None)
        # "<p>=><q>": a point closing bracket followed by an implication.
        if op == ">=" and text.startswith(">=>", i):
            op = ">"
        if op is None:
            raise QddcSyntaxError(f"unexpected character {ch!r}", line, column)
        tokens.append(Token("op", op, line, column))
        column += len(op)
        i += len(op)

    tokens.append(Token("eof", "", line, column))
    return tokens


class TokenStream:
    def __init__(self, tokens: list[Token]):
        self._tokens = tokens
        self._pos = 0

    @classmethod
    def from_text(cls, text: str) -> "TokenStream":
        return cls(tokenize(text))

    @property
    def current(self) -> Token:
        return self._tokens[self._pos]

    def peek(self, offset: int = 1) -> Token:
        idx = min(self._pos + offset, len(self._tokens) - 1)
        return self._tokens[idx]

    def advance(self) -> Token:
        tok = self._tokens[self._pos]
        if tok.kind != "eof":
            self._pos += 1
        return tok

    def accept_op(self, text: str) -> Optional[Token]:
        if self.current.is_op(text):
            return self.advance()
        return None

    def expect_op(self, text: str) -> Token:
        tok = self.current
        if not tok.is_op(text):
            raise self.error(f"expected {text!r}, found {tok.text or 'end of input'!r}")
        return self.advance()

    def expect_ident(self) -> Token:
        tok = self.current
        if tok.kind != "ident":
            raise self.error(f"expected identifier, found {tok.text or 'end of input'!r}")
        return self.advance()

    def expect_eof(self) -> None:
        if self.current.kind != "eof":
            raise self.error(f"unexpected trailing input {self.current.text!r}")

    def error(self, message: str, token: Optional[Token] = None) -> QddcSyntaxError:
        tok = token or self.current
        return QddcSyntaxError(message, tok.line, tok.column)

    def splice(self, start: int, end: int, replacement: list[Token]) -> None:
        """Replace tokens [start, end) with `replacement` and rewind to start."""
        self._tokens[start:end] = replacement
        self._pos = start

    @property
    def position(self) -> int:
        return self._pos

    def tokens_between(self, start: int, end: int) -> list[Token]:
        return list(self._tokens[start:end])

"""Recursive-descent parser for the QDDC concrete syntax.

Precedence, loosest first: quantifier bodies (extend maximally), `<=>`,
`=>` (right-associative), `||`, `&&`, `^`, then the prefix operators
`!`, `[]`, `<>` and `pref`. Macro calls are expanded by token substitution
before the expanded text is parsed.
"""
from __future__ import annotations

from typing import Collection, Optional

from qddc_shield_synth.errors import DeclarationError, MacroError
from qddc_shield_synth.prop_logic import FALSE, TRUE, parse_prop_expr
from qddc_shield_synth.qddc.ast import (
    COMPARATORS,
    All,
    AllButLast,
    And,
    Box,
    Chop,
    Diamond,
    EP,
    Exists,
    Ext,
    Forall,
    Iff,
    Implies,
    Not,
    Or,
    Point,
    Pref,
    Pt,
    Qddc,
    ScountCmp,
    SdurCmp,
    SlenCmp,
)
from qddc_shield_synth.qddc.macros import MacroTable, builtin_macros, check_arity
from qddc_shield_synth.syntax import Token, TokenStream, tokenize

KEYWORDS = {"true", "false", "pt", "ext", "slen", "scount", "sdur", "pref", "EP", "ex", "all"}
MAX_EXPANSIONS = 10_000


def parse(text: str, vars: Collection[str], macros: Optional[MacroTable] = None) -> Qddc:
    parser = _Parser(TokenStream.from_text(text), set(vars), builtin_macros() if macros is None else macros)
    try:
        formula = parser.formula()
    except RecursionError:
        raise MacroError(f"Formula nests too deeply after {parser.expansions} macro expansions (recursive macro?).") from None
    parser.stream.expect_eof()
    return formula


class _Parser:
    def __init__(self, stream: TokenStream, declared: set[str], macros: MacroTable):
        self.stream = stream
        self.declared = declared
        self.macros = macros
        self.expansions = 0

    @staticmethod
    def _pos(tok: Token) -> tuple[int, int]:
        return (tok.line, tok.column)

    def formula(self) -> Qddc:
        tok = self.stream.current
        if tok.kind == "ident" and tok.text in ("ex", "all"):
            return self.quantifier()
        return self.iff()

    def quantifier(self) -> Qddc:
        tok = self.stream.advance()
        var = self.stream.expect_ident().text
        self.stream.expect_op(".")
        outer = self.declared
        self.declared = outer | {var}
        try:
            body = self.formula()
        finally:
            self.declared = outer
        node = Exists if tok.text == "ex" else Forall
        return node(var, body, pos=self._pos(tok))

    def iff(self) -> Qddc:
        left = self.implies()
        while (tok := self.stream.accept_op("<=>")) is not None:
            left = Iff(left, self.implies(), pos=self._pos(tok))
        return left

    def implies(self) -> Qddc:
        left = self.disjunction()
        tok = self.stream.accept_op("=>")
        if tok is not None:
            return Implies(left, self.implies(), pos=self._pos(tok))
        return left

    def disjunction(self) -> Qddc:
        left = self.conjunction()
        while (tok := self.stream.accept_op("||")) is not None:
            left = Or(left, self.conjunction(), pos=self._pos(tok))
        return left

    def conjunction(self) -> Qddc:
        left = self.chop()
        while (tok := self.stream.accept_op("&&")) is not None:
            left = And(left, self.chop(), pos=self._pos(tok))
        return left

    def chop(self) -> Qddc:
        left = self.unary()
        while (tok := self.stream.accept_op("^")) is not None:
            left = Chop(left, self.unary(), pos=self._pos(tok))
        return left

    def unary(self) -> Qddc:
        tok = self.stream.current
        if self.stream.accept_op("!"):
            return Not(self.unary(), pos=self._pos(tok))
        if self.stream.accept_op("[]"):
            return Box(self.unary(), pos=self._pos(tok))
        if self.stream.accept_op("<>"):
            return Diamond(self.unary(), pos=self._pos(tok))
        if tok.kind == "ident" and tok.text == "pref":
            self.stream.advance()
            return Pref(self.unary(), pos=self._pos(tok))
        if tok.kind == "ident" and tok.text in ("ex", "all"):
            return self.quantifier()
        return self.atom()

    def prop(self):
        return parse_prop_expr(self.stream, self.declared)

    def atom(self) -> Qddc:
        stream = self.stream
        tok = stream.current
        pos = self._pos(tok)

        if stream.accept_op("<"):
            phi = self.prop()
            stream.expect_op(">")
            return Point(phi, pos=pos)
        if stream.accept_op("[["):
            phi = self.prop()
            stream.expect_op("]]")
            return All(phi, pos=pos)
        if stream.accept_op("["):
            phi = self.prop()
            stream.expect_op("]")
            return AllButLast(phi, pos=pos)
        if stream.accept_op("("):
            inner = self.formula()
            stream.expect_op(")")
            return inner

        if tok.kind != "ident":
            raise stream.error(f"expected a formula, found {tok.text or 'end of input'!r}")

        if tok.text in self.macros and tok.text not in KEYWORDS:
            self.expand_macro()
            return self.atom()

        stream.advance()
        if tok.text == "true":
            return All(TRUE, pos=pos)
        if tok.text == "false":
            return All(FALSE, pos=pos)
        if tok.text == "pt":
            return Pt(pos=pos)
        if tok.text == "ext":
            return Ext(pos=pos)
        if tok.text == "slen":
            op, bound = self.comparison()
            return SlenCmp(op, bound, pos=pos)
        if tok.text in ("scount", "sdur"):
            phi = self.prop()
            op, bound = self.comparison()
            node = ScountCmp if tok.text == "scount" else SdurCmp
            return node(phi, op, bound, pos=pos)
        if tok.text == "EP":
            stream.expect_op("(")
            var = stream.expect_ident()
            stream.expect_op(")")
            if var.text not in self.declared:
                raise DeclarationError(
                    f"line {var.line}, column {var.column}: undeclared variable {var.text!r}"
                )
            return EP(var.text, pos=pos)
        raise stream.error(f"{tok.text!r} is not a formula (undefined macro or bare variable)", tok)

    def comparison(self) -> tuple[str, int]:
        tok = self.stream.current
        if tok.kind != "op" or tok.text not in COMPARATORS:
            raise self.stream.error(f"expected a comparison operator, found {tok.text or 'end of input'!r}")
        self.stream.advance()
        return tok.text, self.number()

    def number(self) -> int:
        if self.stream.accept_op("("):
            value = self.number()
            self.stream.expect_op(")")
            return value
        tok = self.stream.current
        if tok.kind != "number":
            raise self.stream.error(f"expected a natural number, found {tok.text or 'end of input'!r}")
        self.stream.advance()
        return int(tok.text)

    def expand_macro(self) -> None:
        stream = self.stream
        start = stream.position
        call = stream.advance()
        macro = self.macros[call.text]
        self.expansions += 1
        if self.expansions > MAX_EXPANSIONS:
            raise MacroError(f"Macro expansion limit exceeded at {call.text} (recursive macro?).")

        args: list[list[Token]] = []
        if stream.current.is_op("("):
            stream.advance()
            args = self._macro_args(call)
        check_arity(macro, len(args))

        substitution = dict(zip(macro.params, args))
        body: list[Token] = []
        for tok in tokenize(macro.body)[:-1]:
            if tok.kind == "ident" and tok.text in substitution:
                body.append(Token("op", "(", call.line, call.column))
                body.extend(substitution[tok.text])
                body.append(Token("op", ")", call.line, call.column))
            else:
                body.append(Token(tok.kind, tok.text, call.line, call.column))
        replacement = [Token("op", "(", call.line, call.column), *body, Token("op", ")", call.line, call.column)]
        stream.splice(start, stream.position, replacement)

    def _macro_args(self, call: Token) -> list[list[Token]]:
        stream = self.stream
        args: list[list[Token]] = []
        current: list[Token] = []
        depth = 0
        while True:
            tok = stream.advance()
            if tok.kind == "eof":
                raise stream.error(f"unterminated argument list of macro {call.text}", call)
            if tok.is_op("("):
                depth += 1
            elif tok.is_op(")"):
                if depth == 0:
                    if current or args:
                        args.append(current)
                    return args
                depth -= 1
            elif tok.is_op(",") and depth == 0:
                args.append(current)
                current = []
                continue
            current.append(tok)

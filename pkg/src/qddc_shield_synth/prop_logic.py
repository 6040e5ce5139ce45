"""Propositional formulas over a declared variable set, letters and alphabets."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Collection, Iterator, Mapping, Optional

from qddc_shield_synth.constants import MAX_LETTER_VARS
from qddc_shield_synth.errors import CapacityError, DeclarationError
from qddc_shield_synth.syntax import TokenStream


@dataclass(frozen=True)
class VarSet:
    """Ordered, duplicate-free variable names.

    The alphabet index of a letter is the binary number whose most
    significant bit is the first variable.
    """

    names: tuple[str, ...]

    def __init__(self, names: Collection[str] = ()):
        names = tuple(names)
        seen: set[str] = set()
        for name in names:
            if name in seen:
                raise DeclarationError(f"Duplicate variable {name!r} in {list(names)}.")
            seen.add(name)
        object.__setattr__(self, "names", names)

    def __len__(self) -> int:
        return len(self.names)

    def __iter__(self) -> Iterator[str]:
        return iter(self.names)

    def __contains__(self, name: object) -> bool:
        return name in self.names

    def __repr__(self) -> str:
        return f"VarSet({' '.join(self.names)})"

    @property
    def num_letters(self) -> int:
        return 1 << len(self.names)

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise DeclarationError(f"Variable {name!r} is not declared in {list(self.names)}.") from None

    def shift(self, name: str) -> int:
        return len(self.names) - 1 - self.index(name)

    def bit(self, letter_index: int, name: str) -> bool:
        return bool((letter_index >> self.shift(name)) & 1)

    def letter_index(self, assignment: Mapping[str, bool]) -> int:
        missing = [n for n in self.names if n not in assignment]
        extra = [n for n in assignment if n not in self.names]
        if missing or extra:
            raise DeclarationError(
                f"Letter must assign exactly {list(self.names)}; missing {missing}, unexpected {extra}."
            )
        index = 0
        for name in self.names:
            index = (index << 1) | int(bool(assignment[name]))
        return index

    def letter(self, index: int) -> "Letter":
        return Letter(self, index)

    def union(self, other: Collection[str]) -> "VarSet":
        return VarSet(self.names + tuple(n for n in other if n not in self.names))

    def without(self, names: Collection[str]) -> "VarSet":
        return VarSet(tuple(n for n in self.names if n not in names))

    def projection(self, sub: "VarSet") -> list[int]:
        """For every letter of this alphabet, the index of its restriction to `sub`."""
        shifts = [self.shift(n) for n in sub.names]
        out = []
        for idx in range(self.num_letters):
            value = 0
            for s in shifts:
                value = (value << 1) | ((idx >> s) & 1)
            out.append(value)
        return out


@dataclass(frozen=True)
class Letter:
    vars: VarSet
    index: int

    def __getitem__(self, name: str) -> bool:
        return self.vars.bit(self.index, name)

    @classmethod
    def from_assignment(cls, vars: VarSet, assignment: Mapping[str, bool]) -> "Letter":
        return cls(vars, vars.letter_index(assignment))

    def as_dict(self) -> dict[str, bool]:
        return {name: self[name] for name in self.vars}

    def bits(self) -> str:
        return "".join("1" if self[name] else "0" for name in self.vars)


# Propositional formula tree.

class Prop:
    pass


@dataclass(frozen=True)
class PConst(Prop):
    value: bool


@dataclass(frozen=True)
class PVar(Prop):
    name: str


@dataclass(frozen=True)
class PNot(Prop):
    arg: Prop


@dataclass(frozen=True)
class PAnd(Prop):
    left: Prop
    right: Prop


@dataclass(frozen=True)
class POr(Prop):
    left: Prop
    right: Prop


@dataclass(frozen=True)
class PImplies(Prop):
    left: Prop
    right: Prop


@dataclass(frozen=True)
class PIff(Prop):
    left: Prop
    right: Prop


TRUE = PConst(True)
FALSE = PConst(False)


def eval_prop(phi: Prop, letter: Letter) -> bool:
    if isinstance(phi, PConst):
        return phi.value
    if isinstance(phi, PVar):
        if phi.name not in letter.vars:
            raise DeclarationError(f"Variable {phi.name!r} is not declared in {list(letter.vars)}.")
        return letter[phi.name]
    if isinstance(phi, PNot):
        return not eval_prop(phi.arg, letter)
    if isinstance(phi, PAnd):
        return eval_prop(phi.left, letter) and eval_prop(phi.right, letter)
    if isinstance(phi, POr):
        return eval_prop(phi.left, letter) or eval_prop(phi.right, letter)
    if isinstance(phi, PImplies):
        return (not eval_prop(phi.left, letter)) or eval_prop(phi.right, letter)
    if isinstance(phi, PIff):
        return eval_prop(phi.left, letter) == eval_prop(phi.right, letter)
    raise TypeError(f"Not a propositional formula: {phi!r}")


def enumerate_letters(vars: VarSet) -> list[Letter]:
    if len(vars) > MAX_LETTER_VARS:
        raise CapacityError(
            f"Alphabet over {len(vars)} variables exceeds the cap of {MAX_LETTER_VARS} variables."
        )
    return [Letter(vars, i) for i in range(vars.num_letters)]


def truth_table(phi: Prop, vars: VarSet) -> tuple[bool, ...]:
    """Truth value of `phi` on every letter index of `vars`."""
    if len(vars) > MAX_LETTER_VARS:
        raise CapacityError(
            f"Alphabet over {len(vars)} variables exceeds the cap of {MAX_LETTER_VARS} variables."
        )
    n = vars.num_letters
    full = (1 << n) - 1
    masks: dict[str, int] = {}
    for name in vars:
        s = vars.shift(name)
        masks[name] = sum(1 << idx for idx in range(n) if (idx >> s) & 1)

    def mask(f: Prop) -> int:
        if isinstance(f, PConst):
            return full if f.value else 0
        if isinstance(f, PVar):
            if f.name not in masks:
                raise DeclarationError(f"Variable {f.name!r} is not declared in {list(vars)}.")
            return masks[f.name]
        if isinstance(f, PNot):
            return full & ~mask(f.arg)
        if isinstance(f, PAnd):
            return mask(f.left) & mask(f.right)
        if isinstance(f, POr):
            return mask(f.left) | mask(f.right)
        if isinstance(f, PImplies):
            return (full & ~mask(f.left)) | mask(f.right)
        if isinstance(f, PIff):
            return full & ~(mask(f.left) ^ mask(f.right))
        raise TypeError(f"Not a propositional formula: {f!r}")

    m = mask(phi)
    return tuple(bool((m >> idx) & 1) for idx in range(n))


def free_vars(phi: Prop) -> frozenset[str]:
    if isinstance(phi, PConst):
        return frozenset()
    if isinstance(phi, PVar):
        return frozenset({phi.name})
    if isinstance(phi, PNot):
        return free_vars(phi.arg)
    return free_vars(phi.left) | free_vars(phi.right)


def rename(phi: Prop, mapping: Mapping[str, str]) -> Prop:
    if isinstance(phi, PConst):
        return phi
    if isinstance(phi, PVar):
        return PVar(mapping.get(phi.name, phi.name))
    if isinstance(phi, PNot):
        return PNot(rename(phi.arg, mapping))
    return type(phi)(rename(phi.left, mapping), rename(phi.right, mapping))


_BINARY_TEXT = {PAnd: "&&", POr: "||", PImplies: "=>", PIff: "<=>"}


def prop_to_text(phi: Prop) -> str:
    if isinstance(phi, PConst):
        return "1" if phi.value else "0"
    if isinstance(phi, PVar):
        return phi.name
    if isinstance(phi, PNot):
        return f"!{prop_to_text(phi.arg)}"
    return f"({prop_to_text(phi.left)} {_BINARY_TEXT[type(phi)]} {prop_to_text(phi.right)})"


# Concrete syntax: 0 1 true false ident ! && || => <=> ( )
# Precedence: ! > && > || > => > <=>, with => right-associative.

def parse_prop(text: str, vars: Optional[Collection[str]] = None) -> Prop:
    stream = TokenStream.from_text(text)
    phi = parse_prop_expr(stream, vars)
    stream.expect_eof()
    return phi


def parse_prop_expr(stream: TokenStream, declared: Optional[Collection[str]]) -> Prop:
    left = _parse_implies(stream, declared)
    while stream.accept_op("<=>"):
        left = PIff(left, _parse_implies(stream, declared))
    return left


def _parse_implies(stream: TokenStream, declared: Optional[Collection[str]]) -> Prop:
    left = _parse_or(stream, declared)
    if stream.accept_op("=>"):
        return PImplies(left, _parse_implies(stream, declared))
    return left


def _parse_or(stream: TokenStream, declared: Optional[Collection[str]]) -> Prop:
    left = _parse_and(stream, declared)
    while stream.accept_op("||"):
        left = POr(left, _parse_and(stream, declared))
    return left


def _parse_and(stream: TokenStream, declared: Optional[Collection[str]]) -> Prop:
    left = _parse_unary(stream, declared)
    while stream.accept_op("&&"):
        left = PAnd(left, _parse_unary(stream, declared))
    return left


def _parse_unary(stream: TokenStream, declared: Optional[Collection[str]]) -> Prop:
    if stream.accept_op("!"):
        return PNot(_parse_unary(stream, declared))
    tok = stream.current
    if stream.accept_op("("):
        inner = parse_prop_expr(stream, declared)
        stream.expect_op(")")
        return inner
    if tok.kind == "number" and tok.text in ("0", "1"):
        stream.advance()
        return PConst(tok.text == "1")
    if tok.kind == "ident":
        stream.advance()
        if tok.text == "true":
            return TRUE
        if tok.text == "false":
            return FALSE
        if declared is not None and tok.text not in declared:
            raise DeclarationError(
                f"line {tok.line}, column {tok.column}: undeclared variable {tok.text!r}"
            )
        return PVar(tok.text)
    raise stream.error(f"expected a propositional formula, found {tok.text or 'end of input'!r}")

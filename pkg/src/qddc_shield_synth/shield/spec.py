"""Shield specifications and the `.qs` spec-file format."""
from __future__ import annotations

import re
from pathlib import Path
from typing import Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from qddc_shield_synth.constants import DEFAULT_DM, DEFAULT_HORIZON, DEVIATION, SSEOK
from qddc_shield_synth.errors import DeclarationError, SpecFileError
from qddc_shield_synth.prop_logic import VarSet
from qddc_shield_synth.qddc.ast import Qddc, free_vars
from qddc_shield_synth.qddc.macros import MacroDef, builtin_macros, merge_macros
from qddc_shield_synth.qddc.parser import parse
from qddc_shield_synth.synthesis.supervisor import OutputOrder
from utils.code_utils import strip_line_comments

HDC_VARS = (SSEOK, DEVIATION)


class ShieldInterface(BaseModel):
    """Shield inputs are I and the SSE outputs O; it emits O', paired with O by position."""

    model_config = ConfigDict(frozen=True)

    inputs: list[str]
    sse_outputs: list[str]
    shield_outputs: list[str]

    @model_validator(mode="after")
    def _check(self) -> "ShieldInterface":
        if len(self.sse_outputs) != len(self.shield_outputs):
            raise ValueError(
                f"sse_outputs {self.sse_outputs} and shield_outputs {self.shield_outputs} must pair up one to one."
            )
        names = [*self.inputs, *self.sse_outputs, *self.shield_outputs]
        dup = sorted({n for n in names if names.count(n) > 1})
        if dup:
            raise ValueError(f"Variables {dup} are declared more than once across inputs and outputs.")
        reserved = sorted(set(names) & set(HDC_VARS))
        if reserved:
            raise ValueError(f"{reserved} are reserved indicator names.")
        return self

    @property
    def I(self) -> VarSet:
        return VarSet(self.inputs)

    @property
    def O(self) -> VarSet:
        return VarSet(self.sse_outputs)

    @property
    def O_prime(self) -> VarSet:
        return VarSet(self.shield_outputs)

    @property
    def io_vars(self) -> VarSet:
        """What the shield reads: I then O."""
        return VarSet([*self.inputs, *self.sse_outputs])

    @property
    def game_vars(self) -> VarSet:
        return VarSet([*self.inputs, *self.sse_outputs, *self.shield_outputs])

    @property
    def extended_vars(self) -> VarSet:
        return VarSet([*self.inputs, *self.sse_outputs, *self.shield_outputs, *HDC_VARS])

    @property
    def pairing(self) -> dict[str, str]:
        return dict(zip(self.sse_outputs, self.shield_outputs))


class ShieldType(BaseModel):
    """V0 (burst), V1(k), V2(k), V3(e, d) or a custom HDC over SSEOK and Deviation."""

    model_config = ConfigDict(frozen=True)

    kind: Literal["V0", "V1", "V2", "V3", "custom"]
    k: Optional[int] = Field(default=None, ge=1)
    e: Optional[int] = Field(default=None, ge=0)
    d: Optional[int] = Field(default=None, ge=0)
    formula: Optional[str] = None

    @model_validator(mode="after")
    def _params(self) -> "ShieldType":
        need = {"V0": (), "V1": ("k",), "V2": ("k",), "V3": ("e", "d"), "custom": ("formula",)}[self.kind]
        missing = [p for p in need if getattr(self, p) is None]
        if missing:
            raise ValueError(f"Shield type {self.kind} needs parameter(s) {missing}.")
        return self

    @classmethod
    def parse(cls, text: str) -> "ShieldType":
        text = text.strip()
        if text.startswith("custom"):
            return cls(kind="custom", formula=text[len("custom") :].strip())
        head, *params = text.split()
        values = {}
        for p in params:
            key, sep, value = p.partition("=")
            if not sep or not value.isdigit():
                raise SpecFileError(f"Malformed shield type parameter {p!r} in {text!r}.")
            values[key] = int(value)
        try:
            return cls(kind=head, **values)
        except ValidationError as e:
            raise SpecFileError(f"Invalid shield type {text!r}: {e}") from e

    @property
    def label(self) -> str:
        if self.kind == "V0":
            return "V0"
        if self.kind in ("V1", "V2"):
            return f"{self.kind}({self.k})"
        if self.kind == "V3":
            return f"V3({self.e},{self.d})"
        return "custom"


class ShieldSpec(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    interface: ShieldInterface
    req: Qddc
    shield_type: ShieldType
    order: OutputOrder
    horizon: int = Field(default=DEFAULT_HORIZON, ge=0)
    dm: bool = DEFAULT_DM
    macros: dict[str, MacroDef] = Field(default_factory=builtin_macros)

    @model_validator(mode="after")
    def _check(self) -> "ShieldSpec":
        stray = sorted(free_vars(self.req) - set(self.interface.io_vars))
        if stray:
            raise DeclarationError(f"REQ may only mention inputs and SSE outputs; found {stray}.")
        for lit in self.order.literals:
            if lit.lstrip("!") not in self.interface.shield_outputs:
                raise DeclarationError(f"Output order literal {lit!r} is not a shield output.")
        return self


class ShieldSpecFile(BaseModel):
    """Raw `.qs` contents before formulas are parsed."""

    vars: list[str] = Field(default_factory=list)
    inputs: list[str] = Field(default_factory=list)
    sse_outputs: list[str] = Field(default_factory=list)
    shield_outputs: list[str] = Field(default_factory=list)
    req: Optional[str] = None
    shield_type: Optional[str] = None
    dm: Optional[bool] = None
    horizon: Optional[int] = None
    order: Optional[str] = None
    macros: dict[str, MacroDef] = Field(default_factory=dict)
    formulas: dict[str, str] = Field(default_factory=dict)

    @field_validator("dm", mode="before")
    @classmethod
    def _on_off(cls, value):
        if isinstance(value, str):
            lowered = value.strip().lower()
            if lowered in ("on", "true", "yes", "1"):
                return True
            if lowered in ("off", "false", "no", "0"):
                return False
        return value

    @property
    def has_shield(self) -> bool:
        return bool(self.req) or bool(self.shield_type)

    def macro_table(self) -> dict[str, MacroDef]:
        return merge_macros(builtin_macros(), self.macros)

    def declared_vars(self) -> VarSet:
        """Variables formulas in this file may use."""
        names = [*self.vars, *self.inputs, *self.sse_outputs, *self.shield_outputs]
        if self.has_shield:
            names += list(HDC_VARS)
        seen: list[str] = []
        for n in names:
            if n not in seen:
                seen.append(n)
        return VarSet(seen)

    def parse_formula(self, text: str, vars: Optional[VarSet] = None) -> Qddc:
        return parse(text, vars if vars is not None else self.declared_vars(), self.macro_table())

    def formula_text(self, name: str) -> str:
        if name in self.formulas:
            return self.formulas[name]
        if name == "req" and self.req:
            return self.req
        raise SpecFileError(f"No formula named {name!r}; known: {sorted(['req', *self.formulas])}.")

    def to_spec(
        self,
        horizon: Optional[int] = None,
        dm: Optional[bool] = None,
        order: Optional[str] = None,
    ) -> ShieldSpec:
        missing = [k for k in ("req", "shield_type") if not getattr(self, k)]
        if not self.shield_outputs:
            missing.append("shield_outputs")
        order_text = order if order is not None else self.order
        if order_text is None:
            missing.append("order")
        if missing:
            raise SpecFileError(f"Spec file does not define a shield: missing {missing}.")
        try:
            interface = ShieldInterface(
                inputs=self.inputs, sse_outputs=self.sse_outputs, shield_outputs=self.shield_outputs
            )
            horizon = horizon if horizon is not None else self.horizon
            dm = dm if dm is not None else self.dm
            return ShieldSpec(
                interface=interface,
                req=parse(self.req, interface.io_vars, self.macro_table()),
                shield_type=ShieldType.parse(self.shield_type),
                order=OutputOrder.parse(order_text),
                horizon=DEFAULT_HORIZON if horizon is None else horizon,
                dm=DEFAULT_DM if dm is None else dm,
                macros=self.macro_table(),
            )
        except ValidationError as e:
            raise SpecFileError(f"Invalid shield specification: {e}") from e


_MACRO = re.compile(r"^macro\s+([A-Za-z_][A-Za-z0-9_]*)\s*(?:\(([^)]*)\))?\s*=\s*(.+)$", re.S)
_FORMULA = re.compile(r"^formula\s+([A-Za-z_][A-Za-z0-9_]*)\s*=\s*(.+)$", re.S)
_LIST_KEYS = {"vars", "inputs", "sse_outputs", "shield_outputs"}
_SCALAR_KEYS = {"req", "shield_type", "dm", "horizon", "order"}


def _logical_lines(text: str) -> list[tuple[int, str]]:
    """Join indented continuation lines onto the entry they continue."""
    entries: list[tuple[int, str]] = []
    for lineno, raw in enumerate(strip_line_comments(text).splitlines(), start=1):
        if not raw.strip():
            continue
        if raw[:1].isspace():
            if not entries:
                raise SpecFileError(f"line {lineno}: continuation line with nothing to continue")
            start, body = entries[-1]
            entries[-1] = (start, f"{body} {raw.strip()}")
        else:
            entries.append((lineno, raw.strip()))
    return entries


def parse_spec_text(text: str) -> ShieldSpecFile:
    fields: dict = {"macros": {}, "formulas": {}}
    for lineno, entry in _logical_lines(text):
        if entry.startswith("macro"):
            m = _MACRO.match(entry)
            if not m:
                raise SpecFileError(f"line {lineno}: malformed macro definition {entry!r}")
            name, params, body = m.groups()
            try:
                fields["macros"][name] = MacroDef(
                    name=name, params=[p.strip() for p in (params or "").split(",") if p.strip()], body=body.strip()
                )
            except ValidationError as e:
                raise SpecFileError(f"line {lineno}: {e}") from e
            continue
        if entry.startswith("formula"):
            m = _FORMULA.match(entry)
            if not m:
                raise SpecFileError(f"line {lineno}: malformed formula definition {entry!r}")
            fields["formulas"][m.group(1)] = m.group(2).strip()
            continue
        key, sep, value = entry.partition(":")
        key = key.strip()
        if not sep or key not in _LIST_KEYS | _SCALAR_KEYS:
            raise SpecFileError(f"line {lineno}: unknown entry {entry!r}")
        if key in fields:
            raise SpecFileError(f"line {lineno}: {key!r} given twice")
        fields[key] = value.replace(",", " ").split() if key in _LIST_KEYS else value.strip()
    try:
        return ShieldSpecFile(**fields)
    except ValidationError as e:
        raise SpecFileError(f"Invalid spec file: {e}") from e


def load_spec_file(path: Path | str) -> ShieldSpecFile:
    path = Path(path)
    if not path.is_file():
        raise SpecFileError(f"Spec file not found: {path}")
    return parse_spec_text(path.read_text(encoding="utf-8"))

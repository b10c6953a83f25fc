"""Expression tree for Excel-style A1 formulas."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Union

from ..sheetspec.addresses import CellAddress, ColumnSpan, RangeRef, RowSpan

AreaRef = Union[RangeRef, ColumnSpan, RowSpan]


@dataclass(frozen=True)
class Number:
    value: float


@dataclass(frozen=True)
class Text:
    value: str


@dataclass(frozen=True)
class Boolean:
    value: bool


@dataclass(frozen=True)
class CellRef:
    sheet: str | None
    address: CellAddress


@dataclass(frozen=True)
class RangeArea:
    sheet: str | None
    area: AreaRef


@dataclass(frozen=True)
class Name:
    """A bare identifier: a named range, or #NAME? if nothing resolves."""

    name: str


@dataclass(frozen=True)
class Call:
    name: str  # uppercase
    args: tuple["Expr", ...]


@dataclass(frozen=True)
class Binary:
    op: str  # one of: = <> < <= > >= & + - * / ^
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Unary:
    op: str  # "-" or "+"
    operand: "Expr"


Expr = Union[Number, Text, Boolean, CellRef, RangeArea, Name, Call, Binary, Unary]


def walk(expr: Expr) -> Iterator[Expr]:
    """Yield every node in the tree, pre-order."""
    yield expr
    if isinstance(expr, Call):
        for arg in expr.args:
            yield from walk(arg)
    elif isinstance(expr, Binary):
        yield from walk(expr.left)
        yield from walk(expr.right)
    elif isinstance(expr, Unary):
        yield from walk(expr.operand)


def referenced_sheets(expr: Expr) -> set[str | None]:
    """Sheet qualifiers mentioned by refs in the tree (None = host sheet)."""
    out: set[str | None] = set()
    for node in walk(expr):
        if isinstance(node, (CellRef, RangeArea)):
            out.add(node.sheet)
    return out


def function_names(expr: Expr) -> list[str]:
    """All function-call names in the tree, one entry per occurrence."""
    return [node.name for node in walk(expr) if isinstance(node, Call)]

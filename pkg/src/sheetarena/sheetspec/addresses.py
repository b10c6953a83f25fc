"""A1-notation addressing: cell coordinates, ranges, and area references.

Rows are 1-based, columns are 1-based ("A" == 1). Absolute markers ("$")
are accepted on input and normalized away; they only matter inside a
formula's source text, never for cell identity.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator

MAX_ROWS = 10_000
MAX_COLS = 1_000

_CELL_RE = re.compile(r"^\$?([A-Za-z]{1,3})\$?([1-9][0-9]*)$")
_COL_SPAN_RE = re.compile(r"^\$?([A-Za-z]{1,3}):\$?([A-Za-z]{1,3})$")
_ROW_SPAN_RE = re.compile(r"^\$?([1-9][0-9]*):\$?([1-9][0-9]*)$")


def col_to_index(letters: str) -> int:
    """Convert column letters to a 1-based index ("A" -> 1, "AA" -> 27)."""
    index = 0
    for ch in letters.upper():
        if not "A" <= ch <= "Z":
            raise ValueError(f"bad column letters: {letters!r}")
        index = index * 26 + (ord(ch) - ord("A") + 1)
    if index == 0:
        raise ValueError("empty column letters")
    return index


def index_to_col(index: int) -> str:
    """Inverse of :func:`col_to_index`."""
    if index < 1:
        raise ValueError(f"column index must be >= 1, got {index}")
    letters = ""
    while index:
        index, rem = divmod(index - 1, 26)
        letters = chr(ord("A") + rem) + letters
    return letters


@dataclass(frozen=True, order=True)
class CellAddress:
    """One cell coordinate. Ordering is row-major (row, then column)."""

    row: int
    col: int

    def a1(self) -> str:
        return f"{index_to_col(self.col)}{self.row}"

    def in_bounds(self) -> bool:
        return 1 <= self.row <= MAX_ROWS and 1 <= self.col <= MAX_COLS

    @classmethod
    def parse(cls, text: str) -> "CellAddress":
        """Parse "A1", "a1", or "$A$1" into a normalized address."""
        m = _CELL_RE.match(text.strip())
        if not m:
            raise ValueError(f"not a cell address: {text!r}")
        return cls(row=int(m.group(2)), col=col_to_index(m.group(1)))


@dataclass(frozen=True)
class RangeRef:
    """A bounded rectangular range with normalized corners."""

    start: CellAddress
    end: CellAddress

    def __post_init__(self) -> None:
        a, b = self.start, self.end
        if a.row > b.row or a.col > b.col:
            object.__setattr__(self, "start", CellAddress(min(a.row, b.row), min(a.col, b.col)))
            object.__setattr__(self, "end", CellAddress(max(a.row, b.row), max(a.col, b.col)))

    def a1(self) -> str:
        if self.start == self.end:
            return self.start.a1()
        return f"{self.start.a1()}:{self.end.a1()}"

    def cells(self) -> Iterator[CellAddress]:
        """Member cells in row-major order."""
        for row in range(self.start.row, self.end.row + 1):
            for col in range(self.start.col, self.end.col + 1):
                yield CellAddress(row, col)

    def contains(self, addr: CellAddress) -> bool:
        return (
            self.start.row <= addr.row <= self.end.row
            and self.start.col <= addr.col <= self.end.col
        )

    @property
    def n_rows(self) -> int:
        return self.end.row - self.start.row + 1

    @property
    def n_cols(self) -> int:
        return self.end.col - self.start.col + 1

    @classmethod
    def parse(cls, text: str) -> "RangeRef":
        """Parse "A1:B3" or a single "A1" into a bounded range."""
        text = text.strip()
        if ":" in text:
            left, _, right = text.partition(":")
            return cls(CellAddress.parse(left), CellAddress.parse(right))
        single = CellAddress.parse(text)
        return cls(single, single)


@dataclass(frozen=True)
class ColumnSpan:
    """Full-column reference like "A:C" (clipped to a used range later)."""

    first: int
    last: int

    def a1(self) -> str:
        return f"{index_to_col(self.first)}:{index_to_col(self.last)}"


@dataclass(frozen=True)
class RowSpan:
    """Full-row reference like "2:4"."""

    first: int
    last: int

    def a1(self) -> str:
        return f"{self.first}:{self.last}"


AreaRef = RangeRef | ColumnSpan | RowSpan


def parse_area(text: str) -> AreaRef:
    """Parse a bounded range, a full-column span, or a full-row span.

    Raises ValueError on anything else (e.g. "ZZZ" or "A1:foo").
    """
    text = text.strip()
    m = _COL_SPAN_RE.match(text)
    if m:
        a, b = col_to_index(m.group(1)), col_to_index(m.group(2))
        return ColumnSpan(min(a, b), max(a, b))
    m = _ROW_SPAN_RE.match(text)
    if m:
        a, b = int(m.group(1)), int(m.group(2))
        return RowSpan(min(a, b), max(a, b))
    return RangeRef.parse(text)

"""In-memory model of a SheetSpec@2 workbook.

All types are immutable after parse and safe to share across threads.
"""

from __future__ import annotations

import colorsys
from dataclasses import dataclass, field
from enum import Enum
from typing import Union

from .addresses import CellAddress

SHEETSPEC_VERSION = "SheetSpec@2"

# CSS basic color keywords; anything else is dropped with a warning.
NAMED_COLORS = {
    "black": "#000000",
    "silver": "#C0C0C0",
    "gray": "#808080",
    "grey": "#808080",
    "white": "#FFFFFF",
    "maroon": "#800000",
    "red": "#FF0000",
    "purple": "#800080",
    "fuchsia": "#FF00FF",
    "green": "#008000",
    "lime": "#00FF00",
    "olive": "#808000",
    "yellow": "#FFFF00",
    "navy": "#000080",
    "blue": "#0000FF",
    "teal": "#008080",
    "aqua": "#00FFFF",
}


def normalize_color(value: str) -> str | None:
    """Normalize a color to "#RRGGBB" (uppercase), or None if unknown.

    Accepts 6-digit hex with or without "#", 3-digit shorthand, and the
    16 CSS basic color names.
    """
    if not isinstance(value, str):
        return None
    text = value.strip()
    lowered = text.lower()
    if lowered in NAMED_COLORS:
        return NAMED_COLORS[lowered]
    if text.startswith("#"):
        text = text[1:]
    if len(text) == 3 and all(c in "0123456789abcdefABCDEF" for c in text):
        text = "".join(c * 2 for c in text)
    if len(text) == 6 and all(c in "0123456789abcdefABCDEF" for c in text):
        return "#" + text.upper()
    return None


def color_to_hsv(color: str) -> tuple[float, float, float]:
    """Hex "#RRGGBB" -> (hue degrees 0-360, saturation 0-1, value 0-1)."""
    r = int(color[1:3], 16) / 255.0
    g = int(color[3:5], 16) / 255.0
    b = int(color[5:7], 16) / 255.0
    h, s, v = colorsys.rgb_to_hsv(r, g, b)
    return h * 360.0, s, v


class CellKind(str, Enum):
    TEXT = "text"
    NUMBER = "number"
    FORMULA = "formula"


@dataclass(frozen=True)
class Border:
    style: str = "thin"
    color: str | None = None


@dataclass(frozen=True)
class CellStyle:
    fill: str | None = None
    font_color: str | None = None
    font_weight: str | None = None  # "normal" | "bold"
    font_size: float | None = None
    number_format: str | None = None
    border: Border | None = None

    def is_empty(self) -> bool:
        return all(
            v is None
            for v in (
                self.fill,
                self.font_color,
                self.font_weight,
                self.font_size,
                self.number_format,
                self.border,
            )
        )


@dataclass(frozen=True)
class Cell:
    """One addressed cell with exactly one content payload matching ``kind``."""

    address: CellAddress
    kind: CellKind
    text: str | None = None
    number: float | None = None
    formula: str | None = None
    style: CellStyle | None = None

    def is_blank(self) -> bool:
        return self.kind == CellKind.TEXT and self.text == ""


@dataclass(frozen=True)
class NamedRange:
    name: str
    ref: str  # original source text; parsed/checked during validation


# --- conditional formatting rules (six kinds) -------------------------------

_CF_OPERATORS = (
    "equal",
    "notEqual",
    "greaterThan",
    "lessThan",
    "greaterThanOrEqual",
    "lessThanOrEqual",
)


@dataclass(frozen=True)
class CellIsRule:
    ref: str
    operator: str  # one of _CF_OPERATORS
    value: float | str
    style: CellStyle


@dataclass(frozen=True)
class CellIsBetweenRule:
    ref: str
    minimum: float
    maximum: float
    style: CellStyle


@dataclass(frozen=True)
class ExpressionRule:
    ref: str
    formula: str
    style: CellStyle


@dataclass(frozen=True)
class ContainsTextRule:
    ref: str
    text: str
    style: CellStyle


@dataclass(frozen=True)
class ScaleAnchor:
    """Scale endpoint: auto min/max, a percentile, or an explicit number."""

    kind: str = "auto"  # "auto" | "percentile" | "number"
    value: float | None = None


@dataclass(frozen=True)
class ColorScaleRule:
    ref: str
    min_color: str
    max_color: str
    mid_color: str | None = None
    min_anchor: ScaleAnchor = ScaleAnchor()
    max_anchor: ScaleAnchor = ScaleAnchor()


@dataclass(frozen=True)
class DataBarRule:
    ref: str
    color: str
    min_anchor: ScaleAnchor = ScaleAnchor()
    max_anchor: ScaleAnchor = ScaleAnchor()


ConditionalFormatRule = Union[
    CellIsRule,
    CellIsBetweenRule,
    ExpressionRule,
    ContainsTextRule,
    ColorScaleRule,
    DataBarRule,
]


@dataclass(frozen=True)
class Sheet:
    name: str
    cells: tuple[Cell, ...]
    named_ranges: tuple[NamedRange, ...] = ()
    conditional_formats: tuple[ConditionalFormatRule, ...] = ()

    def cell_map(self) -> dict[CellAddress, Cell]:
        return {c.address: c for c in self.cells}


@dataclass(frozen=True)
class OutputRef:
    name: str
    sheet: str
    ref: str
    metric: str  # "value" | "values"


@dataclass(frozen=True)
class GenerationRules:
    disallow_volatile: bool = False
    allowed_functions: tuple[str, ...] | None = None


@dataclass(frozen=True)
class Issue:
    severity: str  # "error" | "warning"
    path: str
    message: str


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    issues: tuple[Issue, ...]

    @property
    def errors(self) -> tuple[Issue, ...]:
        return tuple(i for i in self.issues if i.severity == "error")

    @property
    def warnings(self) -> tuple[Issue, ...]:
        return tuple(i for i in self.issues if i.severity == "warning")


@dataclass(frozen=True)
class Workbook:
    version: str
    sheets: tuple[Sheet, ...]
    outputs: tuple[OutputRef, ...] = ()
    rules: GenerationRules | None = None
    # Style normalization notes collected at parse time (dropped attributes,
    # unknown colors). Not part of the document and excluded from equality.
    parse_warnings: tuple[Issue, ...] = field(default=(), compare=False)

    def sheet_names(self) -> list[str]:
        return [s.name for s in self.sheets]

    def find_sheet(self, name: str) -> Sheet | None:
        """Case-insensitive sheet lookup (A1 references are case-insensitive)."""
        lowered = name.lower()
        for sheet in self.sheets:
            if sheet.name.lower() == lowered:
                return sheet
        return None

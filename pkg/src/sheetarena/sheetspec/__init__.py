"""SheetSpec@2 workbook model: parsing, validation, addressing, serialization."""

from .addresses import (
    MAX_COLS,
    MAX_ROWS,
    CellAddress,
    ColumnSpan,
    RangeRef,
    RowSpan,
    col_to_index,
    index_to_col,
    parse_area,
)
from .model import (
    SHEETSPEC_VERSION,
    Border,
    Cell,
    CellIsBetweenRule,
    CellIsRule,
    CellKind,
    CellStyle,
    ColorScaleRule,
    ConditionalFormatRule,
    ContainsTextRule,
    DataBarRule,
    ExpressionRule,
    GenerationRules,
    Issue,
    NamedRange,
    OutputRef,
    ScaleAnchor,
    Sheet,
    ValidationReport,
    Workbook,
    normalize_color,
)
from .parse import parse_workbook, workbook_from_obj
from .serialize import serialize_workbook, workbook_to_obj
from .validate import used_range, validate_workbook

__all__ = [
    "MAX_COLS",
    "MAX_ROWS",
    "CellAddress",
    "ColumnSpan",
    "RangeRef",
    "RowSpan",
    "col_to_index",
    "index_to_col",
    "parse_area",
    "SHEETSPEC_VERSION",
    "Border",
    "Cell",
    "CellIsBetweenRule",
    "CellIsRule",
    "CellKind",
    "CellStyle",
    "ColorScaleRule",
    "ConditionalFormatRule",
    "ContainsTextRule",
    "DataBarRule",
    "ExpressionRule",
    "GenerationRules",
    "Issue",
    "NamedRange",
    "OutputRef",
    "ScaleAnchor",
    "Sheet",
    "ValidationReport",
    "Workbook",
    "normalize_color",
    "parse_workbook",
    "workbook_from_obj",
    "serialize_workbook",
    "workbook_to_obj",
    "used_range",
    "validate_workbook",
]

"""A1 formula engine: parsing, dependency graph, evaluation."""

from .ast import (
    Binary,
    Boolean,
    Call,
    CellRef,
    Expr,
    Name,
    Number,
    RangeArea,
    Text,
    Unary,
    function_names,
    referenced_sheets,
    walk,
)
from .evaluate import EvaluatedGrid, classify_functions, evaluate_workbook
from .functions import CONDITIONAL_FUNCTIONS, FUNCTIONS, LOOKUP_FUNCTIONS
from .graph import DepGraph, build_dependency_graph
from .parser import parse_formula
from .values import (
    BLANK,
    CellValue,
    ERROR_CODES,
    ErrorValue,
    is_blank,
    is_error,
    is_number,
)

__all__ = [
    "Binary",
    "Boolean",
    "Call",
    "CellRef",
    "Expr",
    "Name",
    "Number",
    "RangeArea",
    "Text",
    "Unary",
    "function_names",
    "referenced_sheets",
    "walk",
    "EvaluatedGrid",
    "classify_functions",
    "evaluate_workbook",
    "CONDITIONAL_FUNCTIONS",
    "FUNCTIONS",
    "LOOKUP_FUNCTIONS",
    "DepGraph",
    "build_dependency_graph",
    "parse_formula",
    "BLANK",
    "CellValue",
    "ERROR_CODES",
    "ErrorValue",
    "is_blank",
    "is_error",
    "is_number",
]

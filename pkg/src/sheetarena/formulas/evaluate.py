"""Workbook evaluation: per-cell values, error codes, function usage.

Evaluation runs in dependency (topological) order over the reference
graph, so the result is independent of the order cells appear in the
document. Cells on reference cycles evaluate to #CIRC!; every other error
code is produced by the expression itself and propagates to dependents.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field

from ..sheetspec.addresses import CellAddress, RangeRef
from ..sheetspec.model import Cell, CellKind, Sheet, Workbook
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
)
from .functions import (
    CONDITIONAL_FUNCTIONS,
    FUNCTIONS,
    LOOKUP_FUNCTIONS,
    Operand,
    RangeOperand,
    compare,
    first_error,
    power,
    to_number,
    to_scalar,
    to_text,
)
from .graph import DepGraph, build_dependency_graph, clip_area, topological_order
from .values import (
    BLANK,
    CIRC_ERROR,
    CellValue,
    DIV0_ERROR,
    ErrorValue,
    NAME_ERROR,
    REF_ERROR,
    VALUE_ERROR,
    value_to_json,
)

Node = tuple[str, CellAddress]


@dataclass
class EvaluatedGrid:
    """Computed values for every non-empty cell, plus usage accounting."""

    values: dict[Node, CellValue]
    formula_cell_count: int
    error_cell_count: int
    function_usage: Counter
    # Parsed formula bodies, kept for downstream feature extraction.
    asts: dict[Node, Expr] = field(default_factory=dict, compare=False)

    @property
    def error_rate(self) -> float:
        if self.formula_cell_count == 0:
            return 0.0
        return self.error_cell_count / self.formula_cell_count

    def to_json_obj(self) -> dict:
        out: dict[str, dict] = {}
        for (sheet, addr), value in sorted(
            self.values.items(), key=lambda kv: (kv[0][0], kv[0][1])
        ):
            out.setdefault(sheet, {})[addr.a1()] = value_to_json(value)
        return out


def literal_value(cell: Cell) -> CellValue:
    if cell.kind == CellKind.NUMBER:
        return cell.number
    if cell.kind == CellKind.TEXT:
        return BLANK if cell.text == "" else cell.text
    raise ValueError("formula cells have no literal value")


class _Evaluator:
    def __init__(self, wb: Workbook, graph: DepGraph):
        self.wb = wb
        self.graph = graph
        self.sheets: dict[str, Sheet] = {s.name: s for s in wb.sheets}
        self.cells: dict[str, dict[CellAddress, Cell]] = {
            s.name: s.cell_map() for s in wb.sheets
        }
        self.values: dict[Node, CellValue] = {}

    def run(self) -> dict[Node, CellValue]:
        for sheet in self.wb.sheets:
            for cell in sheet.cells:
                if cell.kind != CellKind.FORMULA and not cell.is_blank():
                    self.values[(sheet.name, cell.address)] = literal_value(cell)
        for node in self.graph.cycle_nodes:
            self.values[node] = CIRC_ERROR
        for node in self.graph.unparseable:
            if node not in self.graph.cycle_nodes:
                self.values[node] = NAME_ERROR
        for node in topological_order(self.graph, self.wb):
            if node in self.graph.unparseable:
                continue
            sheet = self.sheets[node[0]]
            result = to_scalar(self.eval_expr(sheet, self.graph.asts[node]))
            self.values[node] = result
        return self.values

    # -- reference helpers ----------------------------------------------------

    def cell_value(self, sheet_name: str, addr: CellAddress) -> CellValue:
        return self.values.get((sheet_name, addr), BLANK)

    def _resolve_sheet(self, host: Sheet, qualifier: str | None) -> Sheet | None:
        if qualifier is None:
            return host
        return self.wb.find_sheet(qualifier)

    def _range_operand(self, sheet: Sheet, clipped: RangeRef | None) -> RangeOperand:
        if clipped is None:
            return RangeOperand(0, 0, lambda r, c: BLANK, lambda: ())
        start = clipped.start

        def value_at(r: int, c: int) -> CellValue:
            return self.cell_value(
                sheet.name, CellAddress(start.row + r - 1, start.col + c - 1)
            )

        def occupied():
            members = [
                (cell.address, self.cell_value(sheet.name, cell.address))
                for cell in sheet.cells
                if clipped.contains(cell.address) and not cell.is_blank()
            ]
            members.sort(key=lambda kv: kv[0])
            return [v for _, v in members]

        return RangeOperand(clipped.n_rows, clipped.n_cols, value_at, occupied)

    # -- expression evaluation --------------------------------------------------

    def eval_expr(self, host: Sheet, expr: Expr) -> Operand:
        if isinstance(expr, Number):
            return expr.value
        if isinstance(expr, Text):
            return expr.value
        if isinstance(expr, Boolean):
            return expr.value
        if isinstance(expr, CellRef):
            sheet = self._resolve_sheet(host, expr.sheet)
            if sheet is None or not expr.address.in_bounds():
                return REF_ERROR
            return self.cell_value(sheet.name, expr.address)
        if isinstance(expr, RangeArea):
            sheet = self._resolve_sheet(host, expr.sheet)
            if sheet is None:
                return REF_ERROR
            clipped = clip_area(sheet, expr.area)
            if clipped is None and isinstance(expr.area, RangeRef):
                return REF_ERROR  # bounded range beyond the grid
            return self._range_operand(sheet, clipped)
        if isinstance(expr, Name):
            from .graph import resolve_named_range

            resolved = resolve_named_range(self.wb, host, expr.name)
            if resolved is None:
                return NAME_ERROR
            target_sheet, area = resolved
            clipped = clip_area(target_sheet, area)
            if clipped is None and isinstance(area, RangeRef):
                return REF_ERROR
            return self._range_operand(target_sheet, clipped)
        if isinstance(expr, Call):
            return self._call(host, expr)
        if isinstance(expr, Binary):
            return self._binary(host, expr)
        if isinstance(expr, Unary):
            return self._unary(host, expr)
        raise TypeError(f"unknown expression node {expr!r}")

    def _call(self, host: Sheet, expr: Call) -> Operand:
        if expr.name not in FUNCTIONS:
            return NAME_ERROR
        min_args, max_args, impl = FUNCTIONS[expr.name]
        args = [self.eval_expr(host, arg) for arg in expr.args]
        if len(args) < min_args or (max_args is not None and len(args) > max_args):
            return VALUE_ERROR
        if expr.name != "IFERROR":
            error = first_error(args)
            if error is not None:
                return error
        return impl(args)

    def _binary(self, host: Sheet, expr: Binary) -> Operand:
        left = to_scalar(self.eval_expr(host, expr.left))
        right = to_scalar(self.eval_expr(host, expr.right))
        if isinstance(left, ErrorValue):
            return left
        if isinstance(right, ErrorValue):
            return right
        op = expr.op
        if op == "&":
            left_text = to_text(left)
            if isinstance(left_text, ErrorValue):
                return left_text
            right_text = to_text(right)
            if isinstance(right_text, ErrorValue):
                return right_text
            return left_text + right_text
        if op in ("=", "<>", "<", "<=", ">", ">="):
            return compare(op, left, right)
        a = to_number(left)
        if isinstance(a, ErrorValue):
            return a
        b = to_number(right)
        if isinstance(b, ErrorValue):
            return b
        if op == "+":
            result = a + b
        elif op == "-":
            result = a - b
        elif op == "*":
            result = a * b
        elif op == "/":
            if b == 0.0:
                return DIV0_ERROR
            result = a / b
        elif op == "^":
            return power(a, b)
        else:
            raise ValueError(f"unknown operator {op!r}")
        if not math.isfinite(result):
            return VALUE_ERROR
        return float(result)

    def _unary(self, host: Sheet, expr: Unary) -> Operand:
        operand = to_scalar(self.eval_expr(host, expr.operand))
        if isinstance(operand, ErrorValue):
            return operand
        if expr.op == "+":
            return operand
        number = to_number(operand)
        if isinstance(number, ErrorValue):
            return number
        return -number


def evaluate_workbook(wb: Workbook, graph: DepGraph | None = None) -> EvaluatedGrid:
    """Evaluate every cell; errors are values, never exceptions."""
    if graph is None:
        graph = build_dependency_graph(wb)
    values = _Evaluator(wb, graph).run()

    formula_nodes = [
        (sheet.name, cell.address)
        for sheet in wb.sheets
        for cell in sheet.cells
        if cell.kind == CellKind.FORMULA
    ]
    usage: Counter = Counter()
    asts: dict[Node, Expr] = {}
    for node, ast in graph.asts.items():
        usage.update(function_names(ast))
        asts[node] = ast
    error_count = sum(1 for node in formula_nodes if isinstance(values[node], ErrorValue))
    return EvaluatedGrid(
        values=values,
        formula_cell_count=len(formula_nodes),
        error_cell_count=error_count,
        function_usage=usage,
        asts=asts,
    )


def classify_functions(grid: EvaluatedGrid) -> tuple[int, int, int]:
    """(distinct function count, lookup occurrences, conditional occurrences)."""
    distinct = len(set(grid.function_usage))
    lookups = sum(n for name, n in grid.function_usage.items() if name in LOOKUP_FUNCTIONS)
    conditionals = sum(
        n for name, n in grid.function_usage.items() if name in CONDITIONAL_FUNCTIONS
    )
    return distinct, lookups, conditionals

"""The 29 per-workbook covariates, plus standardization.

Definition conventions (the contract for every consumer):
  - pct_* features divide by the count of non-empty cells across all
    sheets (empty-string text cells count as empty); style-based pct_*
    numerators therefore only consider non-empty cells, while distinct_*
    and has_border look at every styled cell in the document
  - log_* features are natural log1p transforms of non-negative counts
  - structure features aggregate per-sheet used ranges: row_count sums
    heights, col_count takes the maximum width, aspect ratio is their
    quotient
"""

from __future__ import annotations

import math
from dataclasses import dataclass, fields

import numpy as np

from ..errors import InsufficientData
from ..formulas.ast import Binary, Call, CellRef, Expr, Name, Number, RangeArea, Unary
from ..formulas.evaluate import EvaluatedGrid, classify_functions
from ..formulas.graph import resolve_named_range
from ..formulas.values import is_number
from ..sheetspec.model import CellKind, Workbook, color_to_hsv
from ..sheetspec.validate import used_range
from .tables import TableRegion, detect_tables

FEATURE_NAMES = [
    "compute_error_rate",
    "compute_pct_numeric",
    "log_distinct_functions",
    "log_num_lookups",
    "log_num_conditionals",
    "pct_formulas_with_literals",
    "pct_text",
    "pct_formula",
    "log_total_text_tokens",
    "pct_fill",
    "pct_bold",
    "has_border",
    "pct_number_format",
    "distinct_font_sizes",
    "pct_font_color",
    "log_distinct_font_colors",
    "distinct_fills",
    "finance_color_convention",
    "log_row_count",
    "log_col_count",
    "log_aspect_ratio",
    "cell_density",
    "log_num_blank_rows",
    "num_single_cell_rows",
    "num_tables",
    "has_parallel_tables",
    "avg_tables_per_sheet",
    "largest_table_pct",
    "log_table_size_variance",
]


@dataclass(frozen=True)
class FeatureVector:
    compute_error_rate: float
    compute_pct_numeric: float
    log_distinct_functions: float
    log_num_lookups: float
    log_num_conditionals: float
    pct_formulas_with_literals: float
    pct_text: float
    pct_formula: float
    log_total_text_tokens: float
    pct_fill: float
    pct_bold: float
    has_border: float
    pct_number_format: float
    distinct_font_sizes: float
    pct_font_color: float
    log_distinct_font_colors: float
    distinct_fills: float
    finance_color_convention: float
    log_row_count: float
    log_col_count: float
    log_aspect_ratio: float
    cell_density: float
    log_num_blank_rows: float
    num_single_cell_rows: float
    num_tables: float
    has_parallel_tables: float
    avg_tables_per_sheet: float
    largest_table_pct: float
    log_table_size_variance: float

    def as_dict(self) -> dict[str, float]:
        return {f.name: getattr(self, f.name) for f in fields(self)}

    def as_array(self) -> np.ndarray:
        return np.array([getattr(self, name) for name in FEATURE_NAMES], dtype=float)

    @classmethod
    def from_dict(cls, data: dict[str, float]) -> "FeatureVector":
        return cls(**{name: float(data[name]) for name in FEATURE_NAMES})


assert [f.name for f in fields(FeatureVector)] == FEATURE_NAMES


# --- color families for the finance convention -------------------------------

BLUE_HUE = (200.0, 260.0)
GREEN_HUE = (90.0, 160.0)
BLACK_VALUE_MAX = 0.2


def color_family(color: str) -> str | None:
    """Bucket "#RRGGBB" into "black", "blue", or "green"; None otherwise."""
    hue, saturation, value = color_to_hsv(color)
    if value < BLACK_VALUE_MAX:
        return "black"
    if saturation == 0.0:
        return None  # greys and white have no meaningful hue
    if BLUE_HUE[0] <= hue <= BLUE_HUE[1]:
        return "blue"
    if GREEN_HUE[0] <= hue <= GREEN_HUE[1]:
        return "green"
    return None


def _references_other_sheet(wb: Workbook, host_name: str, ast: Expr) -> bool:
    from ..formulas.ast import walk

    host = wb.find_sheet(host_name)
    for node in walk(ast):
        if isinstance(node, (CellRef, RangeArea)):
            if node.sheet is not None and node.sheet.lower() != host_name.lower():
                return True
        elif isinstance(node, Name) and host is not None:
            resolved = resolve_named_range(wb, host, node.name)
            if resolved is not None and resolved[0].name != host_name:
                return True
    return False


def finance_color_score(wb: Workbook, grid: EvaluatedGrid) -> float:
    """Fraction of blue/black/green-fonted inputs and formulas whose color
    matches its role: blue for number literals, black for same-sheet
    formulas, green for cross-sheet formulas. 0.0 when nothing applies.
    """
    applicable = 0
    conforming = 0
    for sheet in wb.sheets:
        for cell in sheet.cells:
            if cell.is_blank() or cell.style is None or cell.style.font_color is None:
                continue
            family = color_family(cell.style.font_color)
            if family is None:
                continue
            if cell.kind == CellKind.NUMBER:
                role = "blue"
            elif cell.kind == CellKind.FORMULA:
                ast = grid.asts.get((sheet.name, cell.address))
                if ast is not None and _references_other_sheet(wb, sheet.name, ast):
                    role = "green"
                else:
                    role = "black"
            else:
                continue  # text cells are labels; the convention has no role for them
            applicable += 1
            if family == role:
                conforming += 1
    if applicable == 0:
        return 0.0
    return conforming / applicable


# --- embedded numeric literals ------------------------------------------------

# Positional arguments that are structural indices, not "magic numbers"
# (0-based argument positions).
_INDEX_ARG_POSITIONS = {"VLOOKUP": {2}, "HLOOKUP": {2}, "MATCH": {2}, "ROUND": {1}}


def has_free_numeric_literal(expr: Expr) -> bool:
    if isinstance(expr, Number):
        return True
    if isinstance(expr, Unary):
        return has_free_numeric_literal(expr.operand)
    if isinstance(expr, Binary):
        return has_free_numeric_literal(expr.left) or has_free_numeric_literal(expr.right)
    if isinstance(expr, Call):
        skip = _INDEX_ARG_POSITIONS.get(expr.name, frozenset())
        return any(
            has_free_numeric_literal(arg)
            for position, arg in enumerate(expr.args)
            if position not in skip
        )
    return False


# --- main extraction -----------------------------------------------------------


def _log1p(count: float) -> float:
    return math.log1p(count)


def extract_features(wb: Workbook, grid: EvaluatedGrid) -> FeatureVector:
    """Compute all 29 features. Deterministic and pure."""
    non_empty = [
        (sheet, cell)
        for sheet in wb.sheets
        for cell in sheet.cells
        if not cell.is_blank()
    ]
    total = len(non_empty)

    def pct(count: int) -> float:
        return count / total if total else 0.0

    text_cells = [c for _, c in non_empty if c.kind == CellKind.TEXT]
    formula_count = sum(1 for _, c in non_empty if c.kind == CellKind.FORMULA)

    numeric_evaluated = sum(
        1
        for sheet, cell in non_empty
        if is_number(grid.values.get((sheet.name, cell.address)))
    )

    distinct, lookups, conditionals = classify_functions(grid)

    with_literals = sum(
        1
        for sheet, cell in non_empty
        if cell.kind == CellKind.FORMULA
        and (ast := grid.asts.get((sheet.name, cell.address))) is not None
        and has_free_numeric_literal(ast)
    )

    text_tokens = sum(len(c.text.split()) for c in text_cells)

    # Styling. pct numerators over non-empty cells; distinct/has_border over
    # every styled cell (blank cells with a fill are a real layout device).
    fill_count = sum(
        1 for _, c in non_empty if c.style is not None and c.style.fill is not None
    )
    bold_count = sum(
        1 for _, c in non_empty if c.style is not None and c.style.font_weight == "bold"
    )
    number_format_count = sum(
        1 for _, c in non_empty if c.style is not None and c.style.number_format is not None
    )
    font_color_count = sum(
        1 for _, c in non_empty if c.style is not None and c.style.font_color is not None
    )
    all_styles = [c.style for s in wb.sheets for c in s.cells if c.style is not None]
    has_border = any(st.border is not None for st in all_styles)
    distinct_fills = {st.fill for st in all_styles if st.fill is not None}
    distinct_font_colors = {st.font_color for st in all_styles if st.font_color is not None}
    distinct_font_sizes = {st.font_size for st in all_styles if st.font_size is not None}

    # Structure over per-sheet used ranges.
    row_count = 0
    col_count = 0
    bbox_area = 0
    blank_rows = 0
    single_cell_rows = 0
    for sheet in wb.sheets:
        bounds = used_range(sheet)
        if bounds is None:
            continue
        min_row, max_row, min_col, max_col = bounds
        height = max_row - min_row + 1
        width = max_col - min_col + 1
        row_count += height
        col_count = max(col_count, width)
        bbox_area += height * width
        per_row: dict[int, int] = {}
        for cell in sheet.cells:
            if not cell.is_blank():
                per_row[cell.address.row] = per_row.get(cell.address.row, 0) + 1
        blank_rows += sum(1 for r in range(min_row, max_row + 1) if r not in per_row)
        single_cell_rows += sum(1 for n in per_row.values() if n == 1)

    aspect_ratio = row_count / col_count if col_count else 0.0
    density = total / bbox_area if bbox_area else 0.0

    regions: list[TableRegion] = []
    parallel = False
    for sheet in wb.sheets:
        sheet_regions = detect_tables(sheet)
        regions.extend(sheet_regions)
        if not parallel:
            parallel = _has_parallel(sheet_regions)

    sizes = [r.cell_count for r in regions]
    largest_pct = (max(sizes) / total) if sizes and total else 0.0
    size_variance = float(np.var(sizes)) if len(sizes) >= 2 else 0.0

    return FeatureVector(
        compute_error_rate=grid.error_rate,
        compute_pct_numeric=pct(numeric_evaluated),
        log_distinct_functions=_log1p(distinct),
        log_num_lookups=_log1p(lookups),
        log_num_conditionals=_log1p(conditionals),
        pct_formulas_with_literals=(with_literals / formula_count) if formula_count else 0.0,
        pct_text=pct(len(text_cells)),
        pct_formula=pct(formula_count),
        log_total_text_tokens=_log1p(text_tokens),
        pct_fill=pct(fill_count),
        pct_bold=pct(bold_count),
        has_border=1.0 if has_border else 0.0,
        pct_number_format=pct(number_format_count),
        distinct_font_sizes=float(len(distinct_font_sizes)),
        pct_font_color=pct(font_color_count),
        log_distinct_font_colors=_log1p(len(distinct_font_colors)),
        distinct_fills=float(len(distinct_fills)),
        finance_color_convention=finance_color_score(wb, grid),
        log_row_count=_log1p(row_count),
        log_col_count=_log1p(col_count),
        log_aspect_ratio=_log1p(aspect_ratio),
        cell_density=density,
        log_num_blank_rows=_log1p(blank_rows),
        num_single_cell_rows=float(single_cell_rows),
        num_tables=float(len(regions)),
        has_parallel_tables=1.0 if parallel else 0.0,
        avg_tables_per_sheet=len(regions) / len(wb.sheets) if wb.sheets else 0.0,
        largest_table_pct=largest_pct,
        log_table_size_variance=_log1p(size_variance),
    )


def _has_parallel(regions: list[TableRegion]) -> bool:
    """Two same-sheet regions with overlapping rows and disjoint columns."""
    for i, a in enumerate(regions):
        for b in regions[i + 1 :]:
            rows_overlap = a.min_row <= b.max_row and b.min_row <= a.max_row
            cols_disjoint = a.max_col < b.min_col or b.max_col < a.min_col
            if rows_overlap and cols_disjoint:
                return True
    return False


def standardize_features(
    matrix: np.ndarray | list,
) -> tuple[np.ndarray, np.ndarray, np.ndarray, list[int]]:
    """Z-score each column with population stddev.

    Returns (standardized matrix, means, stddevs, zero-variance column
    indices). Zero-variance columns map to all-zeros. Raises
    InsufficientData with fewer than 2 rows.
    """
    data = np.asarray(
        [row.as_array() if isinstance(row, FeatureVector) else row for row in matrix],
        dtype=float,
    )
    if data.ndim != 2 or data.shape[0] < 2:
        raise InsufficientData("standardization needs at least 2 rows")
    means = data.mean(axis=0)
    stds = data.std(axis=0)  # population (ddof=0)
    flagged = [int(j) for j in np.where(stds == 0.0)[0]]
    safe = np.where(stds == 0.0, 1.0, stds)
    standardized = (data - means) / safe
    standardized[:, stds == 0.0] = 0.0
    return standardized, means, stds, flagged

"""Cross-reference validation and geometry helpers for parsed workbooks."""

from __future__ import annotations

from .addresses import parse_area
from .model import CellKind, Issue, Sheet, ValidationReport, Workbook

# Functions whose results change between recalculations; flagged when a
# workbook's rules set disallowVolatile.
VOLATILE_FUNCTIONS = {"NOW", "TODAY", "RAND", "RANDBETWEEN", "OFFSET", "INDIRECT"}


def used_range(sheet: Sheet) -> tuple[int, int, int, int] | None:
    """Tightest (min_row, max_row, min_col, max_col) over cells with content.

    None for sheets with no content. Empty-string text cells count as
    empty.
    """
    rows: list[int] = []
    cols: list[int] = []
    for cell in sheet.cells:
        if cell.is_blank():
            continue
        rows.append(cell.address.row)
        cols.append(cell.address.col)
    if not rows:
        return None
    return min(rows), max(rows), min(cols), max(cols)


def validate_workbook(wb: Workbook) -> ValidationReport:
    """Cross-reference checks over a parsed workbook.

    Dangling references (unknown sheets, unresolvable names, out-of-bounds
    cells) are error-severity; stylistic anomalies and unsupported
    functions are warnings. Pure: same workbook, same report.
    """
    from ..formulas.ast import Call, CellRef, Name, RangeArea, walk
    from ..formulas.functions import FUNCTIONS
    from ..formulas.graph import resolve_named_range
    from ..formulas.parser import parse_formula
    from ..errors import FormulaSyntaxError

    issues: list[Issue] = list(wb.parse_warnings)
    sheet_names = {s.name.lower() for s in wb.sheets}
    allowed = None
    if wb.rules is not None and wb.rules.allowed_functions is not None:
        allowed = set(wb.rules.allowed_functions)
    disallow_volatile = wb.rules.disallow_volatile if wb.rules is not None else False

    for s_idx, sheet in enumerate(wb.sheets):
        base = f"/sheets/{s_idx}"
        seen_names: set[str] = set()
        for n_idx, nr in enumerate(sheet.named_ranges):
            path = f"{base}/namedRanges/{n_idx}"
            try:
                parse_area(nr.ref)
            except ValueError:
                issues.append(
                    Issue("error", f"{path}/ref", f"not a valid A1 range: {nr.ref!r}")
                )
            lowered = nr.name.lower()
            if lowered in seen_names:
                issues.append(
                    Issue("error", f"{path}/name", f"duplicate named range {nr.name!r}")
                )
            seen_names.add(lowered)
            try:
                from .addresses import CellAddress

                CellAddress.parse(nr.name)
                issues.append(
                    Issue(
                        "warning",
                        f"{path}/name",
                        f"name {nr.name!r} looks like a cell address and cannot be "
                        "referenced from formulas",
                    )
                )
            except ValueError:
                pass

        for c_idx, cell in enumerate(sheet.cells):
            if cell.kind != CellKind.FORMULA:
                continue
            path = f"{base}/cells/{c_idx}/formula"
            try:
                ast = parse_formula(cell.formula)
            except FormulaSyntaxError as exc:
                issues.append(Issue("error", path, f"formula does not parse: {exc}"))
                continue
            for node in walk(ast):
                if isinstance(node, (CellRef, RangeArea)):
                    if node.sheet is not None and node.sheet.lower() not in sheet_names:
                        issues.append(
                            Issue("error", path, f"unknown sheet {node.sheet!r}")
                        )
                    if isinstance(node, CellRef) and not node.address.in_bounds():
                        issues.append(
                            Issue(
                                "error",
                                path,
                                f"reference {node.address.a1()} is outside the grid bounds",
                            )
                        )
                elif isinstance(node, Name):
                    if resolve_named_range(wb, sheet, node.name) is None:
                        issues.append(
                            Issue("error", path, f"unknown name {node.name!r}")
                        )
                elif isinstance(node, Call):
                    if node.name not in FUNCTIONS:
                        issues.append(
                            Issue(
                                "warning",
                                path,
                                f"function {node.name} is not supported by the "
                                "evaluation engine",
                            )
                        )
                    if allowed is not None and node.name not in allowed:
                        issues.append(
                            Issue(
                                "warning",
                                path,
                                f"function {node.name} is outside rules.allowedFunctions",
                            )
                        )
                    if disallow_volatile and node.name in VOLATILE_FUNCTIONS:
                        issues.append(
                            Issue(
                                "warning",
                                path,
                                f"volatile function {node.name} used with "
                                "rules.disallowVolatile",
                            )
                        )

        for f_idx, rule in enumerate(sheet.conditional_formats):
            path = f"{base}/conditionalFormats/{f_idx}"
            try:
                parse_area(rule.ref)
            except ValueError:
                issues.append(
                    Issue("error", f"{path}/ref", f"not a valid A1 range: {rule.ref!r}")
                )
            formula = getattr(rule, "formula", None)
            if formula is not None:
                try:
                    parse_formula(formula)
                except FormulaSyntaxError as exc:
                    issues.append(
                        Issue("error", f"{path}/formula", f"formula does not parse: {exc}")
                    )

    for o_idx, output in enumerate(wb.outputs):
        try:
            parse_area(output.ref)
        except ValueError:
            issues.append(
                Issue(
                    "error",
                    f"/outputs/{o_idx}/ref",
                    f"not a valid A1 range: {output.ref!r}",
                )
            )

    ok = not any(issue.severity == "error" for issue in issues)
    return ValidationReport(ok=ok, issues=tuple(issues))

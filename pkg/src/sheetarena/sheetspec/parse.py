"""Parse SheetSpec@2 JSON documents into :class:`Workbook` values.

Structural problems (wrong version, duplicate addresses, bad refs, out of
bounds grids) raise :class:`SchemaViolation` with a JSON-pointer path.
Style-level junk (unknown color names, non-positive font sizes) is dropped
and recorded as a parse warning so validation can surface it.
"""

from __future__ import annotations

import json
import math
from typing import Any

from ..errors import MalformedJson, SchemaViolation
from .addresses import MAX_COLS, MAX_ROWS, CellAddress
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
    Workbook,
    _CF_OPERATORS,
    normalize_color,
)

_CONTENT_KEYS = ("text", "number", "formula")


def parse_workbook(document: bytes | str) -> Workbook:
    """Parse UTF-8 JSON bytes (or str) into a fully materialized Workbook."""
    if isinstance(document, bytes):
        try:
            document = document.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise MalformedJson(f"not valid UTF-8: {exc}") from None
    try:
        data = json.loads(document)
    except json.JSONDecodeError as exc:
        raise MalformedJson(f"not valid JSON: {exc}") from None
    return workbook_from_obj(data)


def workbook_from_obj(data: Any) -> Workbook:
    """Build a Workbook from an already-decoded JSON object."""
    warnings: list[Issue] = []
    obj = _require_object(data, "")
    version = obj.get("version")
    if version != SHEETSPEC_VERSION:
        raise SchemaViolation("/version", f"expected {SHEETSPEC_VERSION!r}, got {version!r}")

    raw_sheets = obj.get("sheets")
    if not isinstance(raw_sheets, list) or not raw_sheets:
        raise SchemaViolation("/sheets", "required non-empty array of sheets")
    sheets = []
    seen_names: set[str] = set()
    for i, raw in enumerate(raw_sheets):
        sheet = _parse_sheet(raw, f"/sheets/{i}", warnings)
        key = sheet.name.lower()
        if key in seen_names:
            raise SchemaViolation(f"/sheets/{i}/name", f"duplicate sheet name {sheet.name!r}")
        seen_names.add(key)
        sheets.append(sheet)

    outputs = []
    raw_outputs = obj.get("outputs")
    if raw_outputs is not None:
        if not isinstance(raw_outputs, list):
            raise SchemaViolation("/outputs", "must be an array")
        for i, raw in enumerate(raw_outputs):
            outputs.append(_parse_output(raw, f"/outputs/{i}", seen_names))

    rules = None
    raw_rules = obj.get("rules")
    if raw_rules is not None:
        rules = _parse_rules(raw_rules, "/rules")

    return Workbook(
        version=SHEETSPEC_VERSION,
        sheets=tuple(sheets),
        outputs=tuple(outputs),
        rules=rules,
        parse_warnings=tuple(warnings),
    )


def _require_object(value: Any, path: str) -> dict:
    if not isinstance(value, dict):
        raise SchemaViolation(path or "/", "expected a JSON object")
    return value


def _require_string(obj: dict, key: str, path: str, allow_empty: bool = True) -> str:
    value = obj.get(key)
    if not isinstance(value, str):
        raise SchemaViolation(f"{path}/{key}", "required string")
    if not allow_empty and not value:
        raise SchemaViolation(f"{path}/{key}", "must be non-empty")
    return value


def _parse_sheet(raw: Any, path: str, warnings: list[Issue]) -> Sheet:
    obj = _require_object(raw, path)
    name = _require_string(obj, "name", path, allow_empty=False)

    raw_cells = obj.get("cells")
    if not isinstance(raw_cells, list):
        raise SchemaViolation(f"{path}/cells", "required array of cells")
    cells = []
    seen: set[CellAddress] = set()
    for i, raw_cell in enumerate(raw_cells):
        cell = _parse_cell(raw_cell, f"{path}/cells/{i}", warnings)
        if cell.address in seen:
            raise SchemaViolation(
                f"{path}/cells/{i}/ref", f"duplicate cell address {cell.address.a1()}"
            )
        seen.add(cell.address)
        cells.append(cell)

    named_ranges = []
    raw_named = obj.get("namedRanges")
    if raw_named is not None:
        if not isinstance(raw_named, list):
            raise SchemaViolation(f"{path}/namedRanges", "must be an array")
        for i, raw_nr in enumerate(raw_named):
            nr_path = f"{path}/namedRanges/{i}"
            nr = _require_object(raw_nr, nr_path)
            named_ranges.append(
                NamedRange(
                    name=_require_string(nr, "name", nr_path, allow_empty=False),
                    ref=_require_string(nr, "ref", nr_path, allow_empty=False),
                )
            )

    formats = []
    raw_formats = obj.get("conditionalFormats")
    if raw_formats is not None:
        if not isinstance(raw_formats, list):
            raise SchemaViolation(f"{path}/conditionalFormats", "must be an array")
        for i, raw_cf in enumerate(raw_formats):
            formats.append(
                _parse_conditional_format(raw_cf, f"{path}/conditionalFormats/{i}", warnings)
            )

    return Sheet(
        name=name,
        cells=tuple(cells),
        named_ranges=tuple(named_ranges),
        conditional_formats=tuple(formats),
    )


def _parse_cell(raw: Any, path: str, warnings: list[Issue]) -> Cell:
    obj = _require_object(raw, path)
    ref = _require_string(obj, "ref", path)
    try:
        address = CellAddress.parse(ref)
    except ValueError:
        raise SchemaViolation(f"{path}/ref", f"not a valid A1 address: {ref!r}") from None
    if not address.in_bounds():
        raise SchemaViolation(
            f"{path}/ref",
            f"{address.a1()} exceeds the {MAX_ROWS}x{MAX_COLS} grid bounds",
        )

    present = [k for k in _CONTENT_KEYS if k in obj]
    if len(present) != 1:
        raise SchemaViolation(
            path, f"cell must carry exactly one of {_CONTENT_KEYS}, got {present or 'none'}"
        )
    kind_key = present[0]

    text = number = formula = None
    if kind_key == "text":
        if not isinstance(obj["text"], str):
            raise SchemaViolation(f"{path}/text", "must be a string")
        text = obj["text"]
        kind = CellKind.TEXT
    elif kind_key == "number":
        value = obj["number"]
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise SchemaViolation(f"{path}/number", "must be a number")
        if not math.isfinite(value):
            raise SchemaViolation(f"{path}/number", "must be finite")
        number = float(value)
        kind = CellKind.NUMBER
    else:
        value = obj["formula"]
        if not isinstance(value, str):
            raise SchemaViolation(f"{path}/formula", "must be a string")
        if not value.startswith("=") or len(value) == 1:
            raise SchemaViolation(
                f"{path}/formula", 'must begin with "=" and be non-empty past it'
            )
        formula = value
        kind = CellKind.FORMULA

    style = None
    if "style" in obj and obj["style"] is not None:
        style = _parse_style(obj["style"], f"{path}/style", warnings)
        if style.is_empty():
            style = None

    return Cell(address=address, kind=kind, text=text, number=number, formula=formula, style=style)


def _parse_style(raw: Any, path: str, warnings: list[Issue]) -> CellStyle:
    obj = _require_object(raw, path)

    def color_of(key: str) -> str | None:
        value = obj.get(key)
        if value is None:
            return None
        normalized = normalize_color(value)
        if normalized is None:
            warnings.append(
                Issue("warning", f"{path}/{key}", f"unknown color {value!r}; attribute dropped")
            )
        return normalized

    fill = color_of("fill")
    font_color = color_of("fontColor")

    font_weight = obj.get("fontWeight")
    if font_weight is not None and font_weight not in ("normal", "bold"):
        warnings.append(
            Issue(
                "warning",
                f"{path}/fontWeight",
                f"unknown weight {font_weight!r}; attribute dropped",
            )
        )
        font_weight = None

    font_size = obj.get("fontSize")
    if font_size is not None:
        if isinstance(font_size, bool) or not isinstance(font_size, (int, float)) or font_size <= 0:
            warnings.append(
                Issue(
                    "warning",
                    f"{path}/fontSize",
                    f"font size must be a positive number, got {font_size!r}; attribute dropped",
                )
            )
            font_size = None
        else:
            font_size = float(font_size)

    number_format = obj.get("numberFormat")
    if number_format is not None and not isinstance(number_format, str):
        warnings.append(
            Issue("warning", f"{path}/numberFormat", "must be a string; attribute dropped")
        )
        number_format = None

    border = None
    raw_border = obj.get("border")
    if raw_border is not None:
        if isinstance(raw_border, str):
            border = Border(style=raw_border)
        elif isinstance(raw_border, dict):
            b_style = raw_border.get("style", "thin")
            b_color = raw_border.get("color")
            if b_color is not None:
                b_color = normalize_color(b_color)
            border = Border(style=b_style if isinstance(b_style, str) else "thin", color=b_color)
        else:
            warnings.append(
                Issue("warning", f"{path}/border", "unrecognized border shape; attribute dropped")
            )

    return CellStyle(
        fill=fill,
        font_color=font_color,
        font_weight=font_weight,
        font_size=font_size,
        number_format=number_format,
        border=border,
    )


def _parse_output(raw: Any, path: str, sheet_names: set[str]) -> OutputRef:
    obj = _require_object(raw, path)
    sheet = _require_string(obj, "sheet", path, allow_empty=False)
    if sheet.lower() not in sheet_names:
        raise SchemaViolation(f"{path}/sheet", f"unknown sheet {sheet!r}")
    metric = _require_string(obj, "metric", path)
    if metric not in ("value", "values"):
        raise SchemaViolation(f"{path}/metric", 'must be "value" or "values"')
    return OutputRef(
        name=_require_string(obj, "name", path, allow_empty=False),
        sheet=sheet,
        ref=_require_string(obj, "ref", path, allow_empty=False),
        metric=metric,
    )


def _parse_rules(raw: Any, path: str) -> GenerationRules:
    obj = _require_object(raw, path)
    disallow = obj.get("disallowVolatile", False)
    if not isinstance(disallow, bool):
        raise SchemaViolation(f"{path}/disallowVolatile", "must be a boolean")
    allowed = obj.get("allowedFunctions")
    if allowed is not None:
        if not isinstance(allowed, list) or not all(isinstance(f, str) for f in allowed):
            raise SchemaViolation(f"{path}/allowedFunctions", "must be an array of strings")
        allowed = tuple(f.upper() for f in allowed)
    return GenerationRules(disallow_volatile=disallow, allowed_functions=allowed)


def _parse_anchor(obj: dict, prefix: str, path: str, warnings: list[Issue]) -> ScaleAnchor:
    kind = obj.get(f"{prefix}Type", "auto")
    if kind not in ("auto", "percentile", "number"):
        warnings.append(
            Issue("warning", f"{path}/{prefix}Type", f"unknown anchor type {kind!r}; using auto")
        )
        kind = "auto"
    value = obj.get(f"{prefix}Value")
    if value is not None and (isinstance(value, bool) or not isinstance(value, (int, float))):
        raise SchemaViolation(f"{path}/{prefix}Value", "must be a number")
    return ScaleAnchor(kind=kind, value=None if value is None else float(value))


def _parse_conditional_format(
    raw: Any, path: str, warnings: list[Issue]
) -> ConditionalFormatRule:
    obj = _require_object(raw, path)
    kind = obj.get("type")
    ref = _require_string(obj, "ref", path, allow_empty=False)

    def style() -> CellStyle:
        if "style" not in obj:
            raise SchemaViolation(f"{path}/style", "required style object")
        return _parse_style(obj["style"], f"{path}/style", warnings)

    def number_field(key: str) -> float:
        value = obj.get(key)
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise SchemaViolation(f"{path}/{key}", "required number")
        return float(value)

    def color_field(key: str) -> str:
        value = obj.get(key)
        normalized = normalize_color(value) if isinstance(value, str) else None
        if normalized is None:
            raise SchemaViolation(f"{path}/{key}", f"required color, got {value!r}")
        return normalized

    if kind == "cellIs":
        operator = obj.get("operator")
        if operator not in _CF_OPERATORS:
            raise SchemaViolation(f"{path}/operator", f"must be one of {_CF_OPERATORS}")
        value = obj.get("value")
        if isinstance(value, bool) or not isinstance(value, (int, float, str)):
            raise SchemaViolation(f"{path}/value", "required number or string")
        value = float(value) if isinstance(value, (int, float)) else value
        return CellIsRule(ref=ref, operator=operator, value=value, style=style())
    if kind == "cellIsBetween":
        return CellIsBetweenRule(
            ref=ref, minimum=number_field("min"), maximum=number_field("max"), style=style()
        )
    if kind == "expression":
        formula = obj.get("formula")
        if not isinstance(formula, str) or not formula.startswith("="):
            raise SchemaViolation(f"{path}/formula", 'required formula string starting with "="')
        return ExpressionRule(ref=ref, formula=formula, style=style())
    if kind == "containsText":
        text = obj.get("text")
        if not isinstance(text, str) or not text:
            raise SchemaViolation(f"{path}/text", "required non-empty string")
        return ContainsTextRule(ref=ref, text=text, style=style())
    if kind == "colorScale":
        mid = obj.get("midColor")
        return ColorScaleRule(
            ref=ref,
            min_color=color_field("minColor"),
            max_color=color_field("maxColor"),
            mid_color=color_field("midColor") if mid is not None else None,
            min_anchor=_parse_anchor(obj, "min", path, warnings),
            max_anchor=_parse_anchor(obj, "max", path, warnings),
        )
    if kind == "dataBar":
        return DataBarRule(
            ref=ref,
            color=color_field("color"),
            min_anchor=_parse_anchor(obj, "min", path, warnings),
            max_anchor=_parse_anchor(obj, "max", path, warnings),
        )
    raise SchemaViolation(
        f"{path}/type",
        "must be one of cellIs, cellIsBetween, expression, containsText, colorScale, dataBar",
    )

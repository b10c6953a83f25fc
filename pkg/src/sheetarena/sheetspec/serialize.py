"""Canonical SheetSpec@2 serialization.

UTF-8, keys in schema order, compact separators, no trailing whitespace.
Used for golden-file tests and for hashing/storing documents.
"""

from __future__ import annotations

import json
from typing import Any

from .model import (
    Border,
    Cell,
    CellIsBetweenRule,
    CellIsRule,
    CellKind,
    CellStyle,
    ColorScaleRule,
    ContainsTextRule,
    DataBarRule,
    ExpressionRule,
    ScaleAnchor,
    Sheet,
    Workbook,
)


def workbook_to_obj(wb: Workbook) -> dict[str, Any]:
    obj: dict[str, Any] = {"version": wb.version, "sheets": [_sheet_obj(s) for s in wb.sheets]}
    if wb.outputs:
        obj["outputs"] = [
            {"name": o.name, "sheet": o.sheet, "ref": o.ref, "metric": o.metric}
            for o in wb.outputs
        ]
    if wb.rules is not None:
        rules: dict[str, Any] = {}
        if wb.rules.disallow_volatile:
            rules["disallowVolatile"] = True
        if wb.rules.allowed_functions is not None:
            rules["allowedFunctions"] = list(wb.rules.allowed_functions)
        obj["rules"] = rules
    return obj


def serialize_workbook(wb: Workbook) -> bytes:
    return json.dumps(workbook_to_obj(wb), ensure_ascii=False, separators=(",", ":")).encode(
        "utf-8"
    )


def _number_repr(value: float) -> int | float:
    # Emit integral floats as JSON integers for stable, human-friendly output.
    if value == int(value) and abs(value) < 1e15:
        return int(value)
    return value


def _sheet_obj(sheet: Sheet) -> dict[str, Any]:
    obj: dict[str, Any] = {"name": sheet.name, "cells": [_cell_obj(c) for c in sheet.cells]}
    if sheet.named_ranges:
        obj["namedRanges"] = [{"name": nr.name, "ref": nr.ref} for nr in sheet.named_ranges]
    if sheet.conditional_formats:
        obj["conditionalFormats"] = [_format_obj(f) for f in sheet.conditional_formats]
    return obj


def _cell_obj(cell: Cell) -> dict[str, Any]:
    obj: dict[str, Any] = {"ref": cell.address.a1()}
    if cell.kind == CellKind.TEXT:
        obj["text"] = cell.text
    elif cell.kind == CellKind.NUMBER:
        obj["number"] = _number_repr(cell.number)
    else:
        obj["formula"] = cell.formula
    if cell.style is not None:
        obj["style"] = _style_obj(cell.style)
    return obj


def _style_obj(style: CellStyle) -> dict[str, Any]:
    obj: dict[str, Any] = {}
    if style.fill is not None:
        obj["fill"] = style.fill
    if style.font_color is not None:
        obj["fontColor"] = style.font_color
    if style.font_weight is not None:
        obj["fontWeight"] = style.font_weight
    if style.font_size is not None:
        obj["fontSize"] = _number_repr(style.font_size)
    if style.number_format is not None:
        obj["numberFormat"] = style.number_format
    if style.border is not None:
        obj["border"] = _border_obj(style.border)
    return obj


def _border_obj(border: Border) -> dict[str, Any]:
    obj: dict[str, Any] = {"style": border.style}
    if border.color is not None:
        obj["color"] = border.color
    return obj


def _anchor_fields(obj: dict[str, Any], prefix: str, anchor: ScaleAnchor) -> None:
    if anchor.kind != "auto":
        obj[f"{prefix}Type"] = anchor.kind
    if anchor.value is not None:
        obj[f"{prefix}Value"] = _number_repr(anchor.value)


def _format_obj(rule) -> dict[str, Any]:
    if isinstance(rule, CellIsRule):
        value = _number_repr(rule.value) if isinstance(rule.value, float) else rule.value
        return {
            "type": "cellIs",
            "ref": rule.ref,
            "operator": rule.operator,
            "value": value,
            "style": _style_obj(rule.style),
        }
    if isinstance(rule, CellIsBetweenRule):
        return {
            "type": "cellIsBetween",
            "ref": rule.ref,
            "min": _number_repr(rule.minimum),
            "max": _number_repr(rule.maximum),
            "style": _style_obj(rule.style),
        }
    if isinstance(rule, ExpressionRule):
        return {
            "type": "expression",
            "ref": rule.ref,
            "formula": rule.formula,
            "style": _style_obj(rule.style),
        }
    if isinstance(rule, ContainsTextRule):
        return {
            "type": "containsText",
            "ref": rule.ref,
            "text": rule.text,
            "style": _style_obj(rule.style),
        }
    if isinstance(rule, ColorScaleRule):
        obj: dict[str, Any] = {"type": "colorScale", "ref": rule.ref, "minColor": rule.min_color}
        if rule.mid_color is not None:
            obj["midColor"] = rule.mid_color
        obj["maxColor"] = rule.max_color
        _anchor_fields(obj, "min", rule.min_anchor)
        _anchor_fields(obj, "max", rule.max_anchor)
        return obj
    if isinstance(rule, DataBarRule):
        obj = {"type": "dataBar", "ref": rule.ref, "color": rule.color}
        _anchor_fields(obj, "min", rule.min_anchor)
        _anchor_fields(obj, "max", rule.max_anchor)
        return obj
    raise TypeError(f"unknown conditional format rule: {rule!r}")

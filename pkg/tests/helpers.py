"""Shared test utilities: workbook builders and small statistics."""

from __future__ import annotations

import json
import math

from sheetarena.sheetspec import Workbook, parse_workbook


def make_doc(sheets: dict[str, dict[str, object]], **extra) -> dict:
    """Build a SheetSpec@2 JSON object from {sheet: {ref: content}}.

    Content: str starting with "=" -> formula; other str -> text; numbers
    -> number; tuple (content, style_dict) attaches a style.
    """
    sheet_objs = []
    for name, cells in sheets.items():
        cell_objs = []
        for ref, content in cells.items():
            style = None
            if isinstance(content, tuple):
                content, style = content
            cell: dict[str, object] = {"ref": ref}
            if isinstance(content, str) and content.startswith("="):
                cell["formula"] = content
            elif isinstance(content, str):
                cell["text"] = content
            elif isinstance(content, bool):
                raise TypeError("booleans are not a cell literal kind")
            else:
                cell["number"] = content
            if style is not None:
                cell["style"] = style
            cell_objs.append(cell)
        sheet_objs.append({"name": name, "cells": cell_objs})
    doc = {"version": "SheetSpec@2", "sheets": sheet_objs}
    doc.update(extra)
    return doc


def make_workbook(sheets: dict[str, dict[str, object]], **extra) -> Workbook:
    return parse_workbook(json.dumps(make_doc(sheets, **extra)).encode())


def rankdata(values) -> list[float]:
    """Average ranks (1-based), ties averaged."""
    order = sorted(range(len(values)), key=lambda i: values[i])
    ranks = [0.0] * len(values)
    i = 0
    while i < len(order):
        j = i
        while j + 1 < len(order) and values[order[j + 1]] == values[order[i]]:
            j += 1
        avg = (i + j) / 2 + 1
        for k in range(i, j + 1):
            ranks[order[k]] = avg
        i = j + 1
    return ranks


def spearman(x, y) -> float:
    assert len(x) == len(y) and len(x) >= 2
    rx, ry = rankdata(x), rankdata(y)
    mx = sum(rx) / len(rx)
    my = sum(ry) / len(ry)
    cov = sum((a - mx) * (b - my) for a, b in zip(rx, ry))
    vx = math.sqrt(sum((a - mx) ** 2 for a in rx))
    vy = math.sqrt(sum((b - my) ** 2 for b in ry))
    return cov / (vx * vy)

"""Independent reference evaluator for randomized cross-checks.

Works directly on structured cell specs produced by the random workbook
generator (never on formula source text), detects cycles by brute-force
self-reachability, and computes values by repeated full-grid sweeps until
a fixed point. Only the value containers are shared with the engine; all
ordering, cycle, and evaluation logic here is written from scratch.

Cell spec forms:
    ("num", float) | ("text", str) | formula spec
Formula specs:
    ("ref", sheet_or_none, (row, col))
    ("lit", float) | ("slit", str)
    ("bin", op, a, b)            op in + - * /
    ("cmp", op, a, b)            op in = <> < <= > >=
    ("neg", a)
    ("concat", a, b)
    ("agg", fn, (sheet_or_none, r1, c1, r2, c2))
    ("if", cond, a, b)
    ("iferror", a, b)
"""

from __future__ import annotations

import math

from sheetarena.formulas.values import (
    BLANK,
    CIRC_ERROR,
    DIV0_ERROR,
    ErrorValue,
    REF_ERROR,
    VALUE_ERROR,
    is_blank,
    is_number,
)

LITERAL_KINDS = ("num", "text")


def _fmt(value: float) -> str:
    if value == int(value) and abs(value) < 1e15:
        return str(int(value))
    return repr(value)


def _as_number(value):
    if isinstance(value, ErrorValue):
        return value
    if isinstance(value, bool):
        return 1.0 if value else 0.0
    if is_blank(value):
        return 0.0
    if isinstance(value, float):
        return value
    return VALUE_ERROR


def _as_text(value):
    if isinstance(value, ErrorValue):
        return value
    if isinstance(value, bool):
        return "TRUE" if value else "FALSE"
    if is_blank(value):
        return ""
    if isinstance(value, float):
        return _fmt(value)
    return value


def _rank(value) -> int:
    if isinstance(value, bool):
        return 2
    if is_number(value):
        return 0
    return 1


def _coerce_blank(value, other):
    if not is_blank(value):
        return value
    if isinstance(other, bool):
        return False
    if is_number(other):
        return 0.0
    return ""


def _eq(a, b) -> bool:
    if is_blank(a) and is_blank(b):
        return True
    a2, b2 = _coerce_blank(a, b), _coerce_blank(b, a)
    if isinstance(a2, bool) or isinstance(b2, bool):
        return isinstance(a2, bool) and isinstance(b2, bool) and a2 == b2
    if is_number(a2) and is_number(b2):
        return a2 == b2
    if isinstance(a2, str) and isinstance(b2, str):
        return a2.casefold() == b2.casefold()
    return False


def _lt(a, b) -> bool:
    a2, b2 = _coerce_blank(a, b), _coerce_blank(b, a)
    ra, rb = _rank(a2), _rank(b2)
    if ra != rb:
        return ra < rb
    if isinstance(a2, str):
        return a2.casefold() < b2.casefold()
    return a2 < b2


def _spec_refs(spec, host: str) -> list[tuple[str, int, int]]:
    """Every cell coordinate a formula spec reads (ranges fully expanded)."""
    kind = spec[0]
    if kind == "ref":
        sheet = spec[1] or host
        return [(sheet, spec[2][0], spec[2][1])]
    if kind in ("lit", "slit"):
        return []
    if kind in ("bin", "cmp"):
        return _spec_refs(spec[2], host) + _spec_refs(spec[3], host)
    if kind in ("neg",):
        return _spec_refs(spec[1], host)
    if kind == "concat":
        return _spec_refs(spec[1], host) + _spec_refs(spec[2], host)
    if kind == "agg":
        sheet, r1, c1, r2, c2 = spec[2]
        sheet = sheet or host
        return [
            (sheet, r, c) for r in range(r1, r2 + 1) for c in range(c1, c2 + 1)
        ]
    if kind == "if":
        return (
            _spec_refs(spec[1], host) + _spec_refs(spec[2], host) + _spec_refs(spec[3], host)
        )
    if kind == "iferror":
        return _spec_refs(spec[1], host) + _spec_refs(spec[2], host)
    raise ValueError(f"unknown spec {spec!r}")


class ReferenceEvaluator:
    """cells: {(sheet, row, col): spec}; sheet_names: the sheets that exist."""

    def __init__(self, cells: dict, sheet_names: list[str]):
        self.cells = cells
        self.sheet_names = set(sheet_names)
        self.values: dict = {}

    # -- cycle detection by self-reachability ---------------------------------

    def cycle_cells(self) -> set:
        formulas = {
            key: spec for key, spec in self.cells.items() if spec[0] not in LITERAL_KINDS
        }
        deps = {}
        for (sheet, row, col), spec in formulas.items():
            targets = []
            for ref in _spec_refs(spec, sheet):
                if ref in formulas:
                    targets.append(ref)
            deps[(sheet, row, col)] = targets

        cycles = set()
        for start in formulas:
            # Can `start` reach itself following dependency edges?
            stack = list(deps[start])
            visited = set()
            while stack:
                node = stack.pop()
                if node == start:
                    cycles.add(start)
                    break
                if node in visited:
                    continue
                visited.add(node)
                stack.extend(deps.get(node, ()))
        return cycles

    # -- fixed-point evaluation -------------------------------------------------

    def run(self) -> dict:
        values = {}
        formulas = {}
        for key, spec in self.cells.items():
            if spec[0] == "num":
                values[key] = float(spec[1])
            elif spec[0] == "text":
                if spec[1] == "":
                    continue  # empty text cells are blank
                values[key] = spec[1]
            else:
                formulas[key] = spec
                values[key] = BLANK
        for key in self.cycle_cells():
            values[key] = CIRC_ERROR
            formulas.pop(key, None)

        for _ in range(len(formulas) + 2):
            changed = False
            for key, spec in formulas.items():
                sheet = key[0]
                result = self.eval_spec(spec, sheet, values)
                if result != values[key] or type(result) is not type(values[key]):
                    values[key] = result
                    changed = True
            if not changed:
                break
        else:
            raise AssertionError("fixed point did not converge")
        self.values = values
        return values

    # -- expression semantics (independent implementation) ----------------------

    def eval_spec(self, spec, host: str, values):
        kind = spec[0]
        if kind == "lit":
            return float(spec[1])
        if kind == "slit":
            return spec[1]
        if kind == "ref":
            sheet = spec[1] or host
            if sheet not in self.sheet_names:
                return REF_ERROR
            return values.get((sheet, spec[2][0], spec[2][1]), BLANK)
        if kind == "neg":
            inner = self.eval_spec(spec[1], host, values)
            number = _as_number(inner)
            return number if isinstance(number, ErrorValue) else -number
        if kind in ("bin", "cmp", "concat"):
            if kind == "concat":
                op, left_spec, right_spec = "&", spec[1], spec[2]
            else:
                op, left_spec, right_spec = spec[1], spec[2], spec[3]
            left = self.eval_spec(left_spec, host, values)
            right = self.eval_spec(right_spec, host, values)
            if isinstance(left, ErrorValue):
                return left
            if isinstance(right, ErrorValue):
                return right
            if op == "&":
                lt, rt = _as_text(left), _as_text(right)
                if isinstance(lt, ErrorValue):
                    return lt
                if isinstance(rt, ErrorValue):
                    return rt
                return lt + rt
            if op in ("=", "<>", "<", "<=", ">", ">="):
                if op == "=":
                    return _eq(left, right)
                if op == "<>":
                    return not _eq(left, right)
                if op == "<":
                    return _lt(left, right)
                if op == ">":
                    return _lt(right, left)
                if op == "<=":
                    return not _lt(right, left)
                return not _lt(left, right)
            a, b = _as_number(left), _as_number(right)
            if isinstance(a, ErrorValue):
                return a
            if isinstance(b, ErrorValue):
                return b
            if op == "+":
                result = a + b
            elif op == "-":
                result = a - b
            elif op == "*":
                result = a * b
            else:
                if b == 0.0:
                    return DIV0_ERROR
                result = a / b
            if not math.isfinite(result):
                return VALUE_ERROR
            return float(result)
        if kind == "agg":
            return self._aggregate(spec, host, values)
        if kind == "if":
            cond = self.eval_spec(spec[1], host, values)
            then = self.eval_spec(spec[2], host, values)
            other = self.eval_spec(spec[3], host, values)
            for arg in (cond, then, other):  # eager error scan, argument order
                if isinstance(arg, ErrorValue):
                    return arg
            if isinstance(cond, bool):
                flag = cond
            elif is_number(cond):
                flag = cond != 0.0
            elif is_blank(cond):
                flag = False
            elif isinstance(cond, str) and cond.upper() in ("TRUE", "FALSE"):
                flag = cond.upper() == "TRUE"
            else:
                return VALUE_ERROR
            return then if flag else other
        if kind == "iferror":
            primary = self.eval_spec(spec[1], host, values)
            fallback = self.eval_spec(spec[2], host, values)
            return fallback if isinstance(primary, ErrorValue) else primary
        raise ValueError(f"unknown spec {spec!r}")

    def _aggregate(self, spec, host: str, values):
        fn = spec[1]
        sheet, r1, c1, r2, c2 = spec[2]
        sheet = sheet or host
        if sheet not in self.sheet_names:
            return REF_ERROR
        members = []
        for row in range(r1, r2 + 1):
            for col in range(c1, c2 + 1):
                key = (sheet, row, col)
                if key in self.cells:
                    value = values.get(key, BLANK)
                    if is_blank(value) and self.cells[key][0] == "text":
                        continue  # empty-text doc cell: treated as blank
                    members.append(value)
        for member in members:
            if isinstance(member, ErrorValue):
                return member
        numbers = [m for m in members if is_number(m)]
        if fn == "SUM":
            total = 0.0
            for n in numbers:
                total += n
            return total
        if fn == "AVERAGE":
            if not numbers:
                return DIV0_ERROR
            total = 0.0
            for n in numbers:
                total += n
            return total / len(numbers)
        if fn == "MIN":
            return float(min(numbers)) if numbers else 0.0
        if fn == "MAX":
            return float(max(numbers)) if numbers else 0.0
        if fn == "COUNT":
            return float(len(numbers))
        if fn == "COUNTA":
            return float(sum(1 for m in members if not is_blank(m)))
        raise ValueError(f"unknown aggregate {fn!r}")

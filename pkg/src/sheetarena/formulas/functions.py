"""Built-in worksheet functions.

Implemented set (v1): SUM, AVERAGE, MIN, MAX, COUNT, COUNTA, ROUND, ABS,
SQRT, POWER, AND, OR, NOT, IF, IFS, IFERROR, SWITCH, SUMIF(S), COUNTIF(S),
AVERAGEIF(S), VLOOKUP, HLOOKUP, LOOKUP, XLOOKUP, INDEX, MATCH, CONCAT,
CONCATENATE, TEXT, NPV, IRR, PMT. Anything else evaluates to #NAME?.

Shared semantics:
  - every argument is evaluated eagerly; any Error among the arguments
    (including inside referenced ranges) propagates, except through IFERROR
  - blanks coerce to 0 in arithmetic and are skipped by aggregates
  - text never silently coerces to a number (#VALUE! instead)
  - numeric-domain failures that fall outside the supported error codes
    (negative sqrt, no IRR root, 0^0) surface as #VALUE!
"""

from __future__ import annotations

import math
from typing import Callable, Iterable, Sequence

from .values import (
    BLANK,
    CellValue,
    DIV0_ERROR,
    ErrorValue,
    NA_ERROR,
    VALUE_ERROR,
    is_blank,
    is_number,
)

LOOKUP_FUNCTIONS = {"VLOOKUP", "HLOOKUP", "LOOKUP", "XLOOKUP", "INDEX", "MATCH"}
CONDITIONAL_FUNCTIONS = {
    "IF",
    "IFS",
    "IFERROR",
    "SWITCH",
    "SUMIF",
    "SUMIFS",
    "COUNTIF",
    "COUNTIFS",
    "AVERAGEIF",
    "AVERAGEIFS",
}


class RangeOperand:
    """A rectangular block of values passed to a function.

    ``n_rows``/``n_cols`` give the clipped shape (0x0 for an empty span over
    an empty sheet). ``value_at`` is 1-based and returns BLANK for empty
    member cells; ``occupied`` iterates non-blank members row-major.
    """

    def __init__(
        self,
        n_rows: int,
        n_cols: int,
        value_at: Callable[[int, int], CellValue],
        occupied: Callable[[], Iterable[CellValue]],
    ):
        self.n_rows = n_rows
        self.n_cols = n_cols
        self.value_at = value_at
        self._occupied = occupied

    def occupied(self) -> Iterable[CellValue]:
        return self._occupied()

    def iter_all(self) -> Iterable[CellValue]:
        for r in range(1, self.n_rows + 1):
            for c in range(1, self.n_cols + 1):
                yield self.value_at(r, c)

    def is_vector(self) -> bool:
        return self.n_rows == 1 or self.n_cols == 1

    def vector(self) -> list[CellValue]:
        return list(self.iter_all())


Operand = CellValue | RangeOperand


def first_error(args: Sequence[Operand]) -> ErrorValue | None:
    for arg in args:
        if isinstance(arg, ErrorValue):
            return arg
        if isinstance(arg, RangeOperand):
            for value in arg.occupied():
                if isinstance(value, ErrorValue):
                    return value
    return None


def _scalarize(value: Operand) -> Operand:
    # A 1x1 range behaves as its single member in scalar contexts.
    if isinstance(value, RangeOperand) and value.n_rows == 1 and value.n_cols == 1:
        return value.value_at(1, 1)
    return value


def to_number(value: Operand) -> float | ErrorValue:
    value = _scalarize(value)
    if isinstance(value, RangeOperand):
        return VALUE_ERROR
    if isinstance(value, ErrorValue):
        return value
    if isinstance(value, bool):
        return 1.0 if value else 0.0
    if isinstance(value, float):
        return value
    if is_blank(value):
        return 0.0
    return VALUE_ERROR  # text does not coerce


def to_text(value: Operand) -> str | ErrorValue:
    value = _scalarize(value)
    if isinstance(value, RangeOperand):
        return VALUE_ERROR
    if isinstance(value, ErrorValue):
        return value
    if isinstance(value, bool):
        return "TRUE" if value else "FALSE"
    if isinstance(value, float):
        return format_number(value)
    if is_blank(value):
        return ""
    return value


def to_boolean(value: Operand) -> bool | ErrorValue:
    value = _scalarize(value)
    if isinstance(value, RangeOperand):
        return VALUE_ERROR
    if isinstance(value, ErrorValue):
        return value
    if isinstance(value, bool):
        return value
    if isinstance(value, float):
        return value != 0.0
    if is_blank(value):
        return False
    upper = value.upper()
    if upper == "TRUE":
        return True
    if upper == "FALSE":
        return False
    return VALUE_ERROR


def to_scalar(value: Operand) -> CellValue:
    """Ranges are invalid in scalar context (except trivial 1x1 ranges)."""
    value = _scalarize(value)
    if isinstance(value, RangeOperand):
        return VALUE_ERROR
    return value


def format_number(value: float) -> str:
    if value == int(value) and abs(value) < 1e15:
        return str(int(value))
    return repr(value)


def _collect_numbers(args: Sequence[Operand]) -> list[float] | ErrorValue:
    """Numbers for aggregation: scalars coerce, range members filter."""
    out: list[float] = []
    for arg in args:
        if isinstance(arg, RangeOperand):
            for value in arg.occupied():
                if is_number(value):
                    out.append(value)
        else:
            number = to_number(arg)
            if isinstance(number, ErrorValue):
                return number
            out.append(number)
    return out


def _numeric_result(value: float) -> CellValue:
    if not math.isfinite(value):
        return VALUE_ERROR
    return float(value)


# --- aggregates --------------------------------------------------------------


def _fn_sum(args):
    numbers = _collect_numbers(args)
    if isinstance(numbers, ErrorValue):
        return numbers
    total = 0.0
    for n in numbers:
        total += n
    return _numeric_result(total)


def _fn_average(args):
    numbers = _collect_numbers(args)
    if isinstance(numbers, ErrorValue):
        return numbers
    if not numbers:
        return DIV0_ERROR
    total = 0.0
    for n in numbers:
        total += n
    return _numeric_result(total / len(numbers))


def _fn_min(args):
    numbers = _collect_numbers(args)
    if isinstance(numbers, ErrorValue):
        return numbers
    return float(min(numbers)) if numbers else 0.0


def _fn_max(args):
    numbers = _collect_numbers(args)
    if isinstance(numbers, ErrorValue):
        return numbers
    return float(max(numbers)) if numbers else 0.0


def _fn_count(args):
    count = 0
    for arg in args:
        if isinstance(arg, RangeOperand):
            count += sum(1 for v in arg.occupied() if is_number(v))
        elif is_number(arg) or isinstance(arg, bool):
            count += 1
    return float(count)


def _fn_counta(args):
    count = 0
    for arg in args:
        if isinstance(arg, RangeOperand):
            count += sum(1 for v in arg.occupied() if not is_blank(v))
        elif not is_blank(arg):
            count += 1
    return float(count)


# --- scalar math -------------------------------------------------------------


def _fn_round(args):
    x = to_number(args[0])
    if isinstance(x, ErrorValue):
        return x
    digits_val = to_number(args[1]) if len(args) > 1 else 0.0
    if isinstance(digits_val, ErrorValue):
        return digits_val
    digits = int(digits_val)  # truncate toward zero
    factor = 10.0 ** digits
    scaled = x * factor
    rounded = math.floor(abs(scaled) + 0.5)
    return _numeric_result(math.copysign(rounded, x) / factor)


def _fn_abs(args):
    x = to_number(args[0])
    if isinstance(x, ErrorValue):
        return x
    return abs(x)


def _fn_sqrt(args):
    x = to_number(args[0])
    if isinstance(x, ErrorValue):
        return x
    if x < 0:
        return VALUE_ERROR
    return math.sqrt(x)


def power(base: float, exponent: float) -> CellValue:
    """Shared by POWER and the ^ operator."""
    if base == 0.0 and exponent == 0.0:
        return VALUE_ERROR
    if base == 0.0 and exponent < 0.0:
        return DIV0_ERROR
    try:
        result = base**exponent
    except (OverflowError, ValueError):
        return VALUE_ERROR
    if isinstance(result, complex):
        return VALUE_ERROR
    return _numeric_result(result)


def _fn_power(args):
    base = to_number(args[0])
    if isinstance(base, ErrorValue):
        return base
    exponent = to_number(args[1])
    if isinstance(exponent, ErrorValue):
        return exponent
    return power(base, exponent)


# --- logic -------------------------------------------------------------------


def _collect_booleans(args) -> list[bool] | ErrorValue:
    out: list[bool] = []
    for arg in args:
        if isinstance(arg, RangeOperand):
            for value in arg.occupied():
                if isinstance(value, bool):
                    out.append(value)
                elif is_number(value):
                    out.append(value != 0.0)
                # text members are ignored, matching aggregate behavior
        else:
            flag = to_boolean(arg)
            if isinstance(flag, ErrorValue):
                return flag
            out.append(flag)
    return out


def _fn_and(args):
    flags = _collect_booleans(args)
    if isinstance(flags, ErrorValue):
        return flags
    if not flags:
        return VALUE_ERROR
    return all(flags)


def _fn_or(args):
    flags = _collect_booleans(args)
    if isinstance(flags, ErrorValue):
        return flags
    if not flags:
        return VALUE_ERROR
    return any(flags)


def _fn_not(args):
    flag = to_boolean(args[0])
    if isinstance(flag, ErrorValue):
        return flag
    return not flag


def _fn_if(args):
    cond = to_boolean(args[0])
    if isinstance(cond, ErrorValue):
        return cond
    if cond:
        return to_scalar(args[1])
    if len(args) > 2:
        return to_scalar(args[2])
    return False


def _fn_ifs(args):
    if len(args) % 2 != 0:
        return VALUE_ERROR
    for i in range(0, len(args), 2):
        cond = to_boolean(args[i])
        if isinstance(cond, ErrorValue):
            return cond
        if cond:
            return to_scalar(args[i + 1])
    return NA_ERROR


def _fn_iferror(args):
    # Dispatch skips global error propagation for IFERROR only.
    value = to_scalar(args[0])
    if isinstance(value, ErrorValue):
        return to_scalar(args[1])
    return value


def _fn_switch(args):
    subject = to_scalar(args[0])
    rest = args[1:]
    pairs = len(rest) // 2
    for i in range(pairs):
        candidate = to_scalar(rest[2 * i])
        if values_equal(subject, candidate):
            return to_scalar(rest[2 * i + 1])
    if len(rest) % 2 == 1:
        return to_scalar(rest[-1])
    return NA_ERROR


# --- comparisons shared with operators ---------------------------------------


def _type_rank(value: CellValue) -> int:
    if isinstance(value, bool):
        return 2
    if is_number(value):
        return 0
    return 1  # text


def values_equal(a: CellValue, b: CellValue) -> bool:
    if is_blank(a) and is_blank(b):
        return True
    if is_blank(a):
        a = _blank_as(b)
    elif is_blank(b):
        b = _blank_as(a)
    if isinstance(a, bool) or isinstance(b, bool):
        return isinstance(a, bool) and isinstance(b, bool) and a == b
    if is_number(a) and is_number(b):
        return a == b
    if isinstance(a, str) and isinstance(b, str):
        return a.casefold() == b.casefold()
    return False


def _blank_as(other: CellValue) -> CellValue:
    if isinstance(other, bool):
        return False
    if is_number(other):
        return 0.0
    return ""


def values_less(a: CellValue, b: CellValue) -> bool:
    if is_blank(a):
        a = _blank_as(b)
    if is_blank(b):
        b = _blank_as(a)
    ra, rb = _type_rank(a), _type_rank(b)
    if ra != rb:
        return ra < rb
    if isinstance(a, str):
        return a.casefold() < b.casefold()
    return a < b


def compare(op: str, a: CellValue, b: CellValue) -> bool:
    if op == "=":
        return values_equal(a, b)
    if op == "<>":
        return not values_equal(a, b)
    if op == "<":
        return values_less(a, b)
    if op == ">":
        return values_less(b, a)
    if op == "<=":
        return not values_less(b, a)
    return not values_less(a, b)  # >=


# --- criteria matching (SUMIF family) -----------------------------------------

_CRITERIA_OPS = ("<>", "<=", ">=", "=", "<", ">")


def _parse_criteria(criteria: CellValue) -> tuple[str, CellValue]:
    if isinstance(criteria, str):
        for op in _CRITERIA_OPS:
            if criteria.startswith(op):
                rest = criteria[len(op):]
                try:
                    return op, float(rest)
                except ValueError:
                    return op, rest
        try:
            return "=", float(criteria)
        except ValueError:
            return "=", criteria
    return "=", criteria


def matches_criteria(value: CellValue, criteria: CellValue) -> bool:
    op, target = _parse_criteria(criteria)
    if op == "=":
        return values_equal(value, target)
    if op == "<>":
        return not values_equal(value, target)
    # Relational criteria only match non-blank, same-typed values.
    if is_blank(value) or is_blank(target):
        return False
    if _type_rank(value) != _type_rank(target):
        return False
    return compare(op, value, target)


def _criteria_pairs(args) -> list[tuple[RangeOperand, CellValue]] | ErrorValue:
    if len(args) % 2 != 0:
        return VALUE_ERROR
    pairs: list[tuple[RangeOperand, CellValue]] = []
    for i in range(0, len(args), 2):
        rng = args[i]
        if not isinstance(rng, RangeOperand):
            return VALUE_ERROR
        pairs.append((rng, to_scalar(args[i + 1])))
    return pairs


def _fn_countif(args):
    rng = args[0]
    if not isinstance(rng, RangeOperand):
        return VALUE_ERROR
    criteria = to_scalar(args[1])
    count = sum(1 for v in rng.iter_all() if matches_criteria(v, criteria))
    return float(count)


def _fn_countifs(args):
    pairs = _criteria_pairs(args)
    if isinstance(pairs, ErrorValue):
        return pairs
    base = pairs[0][0]
    if any(p[0].n_rows != base.n_rows or p[0].n_cols != base.n_cols for p in pairs):
        return VALUE_ERROR
    count = 0
    for r in range(1, base.n_rows + 1):
        for c in range(1, base.n_cols + 1):
            if all(matches_criteria(rng.value_at(r, c), crit) for rng, crit in pairs):
                count += 1
    return float(count)


def _selective_aggregate(args, average: bool, multi: bool):
    """SUMIF/AVERAGEIF (multi=False) and SUMIFS/AVERAGEIFS (multi=True)."""
    if multi:
        target = args[0]
        if not isinstance(target, RangeOperand):
            return VALUE_ERROR
        pairs = _criteria_pairs(args[1:])
        if isinstance(pairs, ErrorValue):
            return pairs
        if any(
            p[0].n_rows != target.n_rows or p[0].n_cols != target.n_cols for p in pairs
        ):
            return VALUE_ERROR
    else:
        rng = args[0]
        if not isinstance(rng, RangeOperand):
            return VALUE_ERROR
        criteria = to_scalar(args[1])
        target = args[2] if len(args) > 2 else rng
        if not isinstance(target, RangeOperand):
            return VALUE_ERROR
        pairs = [(rng, criteria)]

    total = 0.0
    count = 0
    for r in range(1, pairs[0][0].n_rows + 1):
        for c in range(1, pairs[0][0].n_cols + 1):
            if all(matches_criteria(rng.value_at(r, c), crit) for rng, crit in pairs):
                value = target.value_at(r, c) if (r <= target.n_rows and c <= target.n_cols) else BLANK
                if is_number(value):
                    total += value
                    count += 1
    if average:
        if count == 0:
            return DIV0_ERROR
        return _numeric_result(total / count)
    return _numeric_result(total)


def _fn_sumif(args):
    return _selective_aggregate(args, average=False, multi=False)


def _fn_averageif(args):
    return _selective_aggregate(args, average=True, multi=False)


def _fn_sumifs(args):
    return _selective_aggregate(args, average=False, multi=True)


def _fn_averageifs(args):
    return _selective_aggregate(args, average=True, multi=True)


# --- lookups ------------------------------------------------------------------


def _lookup_scan_approximate(values: list[CellValue], lookup: CellValue) -> int | None:
    """Position (0-based) of the last member <= lookup, same-type members only."""
    best = None
    rank = _type_rank(lookup) if not is_blank(lookup) else 0
    for i, member in enumerate(values):
        if is_blank(member) or isinstance(member, ErrorValue):
            continue
        if _type_rank(member) != rank:
            continue
        if values_equal(member, lookup) or values_less(member, lookup):
            best = i
    return best


def _fn_vlookup(args):
    lookup = to_scalar(args[0])
    table = args[1]
    if not isinstance(table, RangeOperand):
        return VALUE_ERROR
    col = to_number(args[2])
    if isinstance(col, ErrorValue):
        return col
    col = int(col)
    if col < 1:
        return VALUE_ERROR
    if col > table.n_cols:
        return ErrorValue("#REF!")
    exact = False
    if len(args) > 3:
        flag = to_boolean(args[3])
        if isinstance(flag, ErrorValue):
            return flag
        exact = not flag
    first_col = [table.value_at(r, 1) for r in range(1, table.n_rows + 1)]
    if exact:
        for i, member in enumerate(first_col):
            if values_equal(member, lookup):
                return table.value_at(i + 1, col)
        return NA_ERROR
    best = _lookup_scan_approximate(first_col, lookup)
    if best is None:
        return NA_ERROR
    return table.value_at(best + 1, col)


def _fn_hlookup(args):
    lookup = to_scalar(args[0])
    table = args[1]
    if not isinstance(table, RangeOperand):
        return VALUE_ERROR
    row = to_number(args[2])
    if isinstance(row, ErrorValue):
        return row
    row = int(row)
    if row < 1:
        return VALUE_ERROR
    if row > table.n_rows:
        return ErrorValue("#REF!")
    exact = False
    if len(args) > 3:
        flag = to_boolean(args[3])
        if isinstance(flag, ErrorValue):
            return flag
        exact = not flag
    first_row = [table.value_at(1, c) for c in range(1, table.n_cols + 1)]
    if exact:
        for i, member in enumerate(first_row):
            if values_equal(member, lookup):
                return table.value_at(row, i + 1)
        return NA_ERROR
    best = _lookup_scan_approximate(first_row, lookup)
    if best is None:
        return NA_ERROR
    return table.value_at(row, best + 1)


def _fn_lookup(args):
    lookup = to_scalar(args[0])
    vector = args[1]
    if not isinstance(vector, RangeOperand) or not vector.is_vector():
        return VALUE_ERROR
    members = vector.vector()
    result_members = members
    if len(args) > 2:
        result = args[2]
        if not isinstance(result, RangeOperand) or not result.is_vector():
            return VALUE_ERROR
        result_members = result.vector()
        if len(result_members) != len(members):
            return VALUE_ERROR
    best = _lookup_scan_approximate(members, lookup)
    if best is None:
        return NA_ERROR
    return result_members[best]


def _fn_xlookup(args):
    lookup = to_scalar(args[0])
    lookup_array = args[1]
    return_array = args[2]
    if not isinstance(lookup_array, RangeOperand) or not lookup_array.is_vector():
        return VALUE_ERROR
    if not isinstance(return_array, RangeOperand) or not return_array.is_vector():
        return VALUE_ERROR
    members = lookup_array.vector()
    results = return_array.vector()
    if len(members) != len(results):
        return VALUE_ERROR
    match_mode = 0
    if len(args) > 4:
        mode = to_number(args[4])
        if isinstance(mode, ErrorValue):
            return mode
        match_mode = int(mode)
    search_order = range(len(members))
    if len(args) > 5:
        mode = to_number(args[5])
        if isinstance(mode, ErrorValue):
            return mode
        if int(mode) == -1:
            search_order = range(len(members) - 1, -1, -1)

    for i in search_order:
        if values_equal(members[i], lookup):
            return results[i]
    if match_mode in (-1, 1):
        best = None
        for i in search_order:
            member = members[i]
            if is_blank(member) or _type_rank(member) != _type_rank(lookup):
                continue
            if match_mode == -1 and values_less(member, lookup):
                if best is None or values_less(members[best], member):
                    best = i
            elif match_mode == 1 and values_less(lookup, member):
                if best is None or values_less(member, members[best]):
                    best = i
        if best is not None:
            return results[best]
    if len(args) > 3:
        return to_scalar(args[3])
    return NA_ERROR


def _fn_index(args):
    rng = args[0]
    if not isinstance(rng, RangeOperand):
        return VALUE_ERROR
    row = to_number(args[1])
    if isinstance(row, ErrorValue):
        return row
    row = int(row)
    if len(args) > 2:
        col = to_number(args[2])
        if isinstance(col, ErrorValue):
            return col
        col = int(col)
    elif rng.n_rows == 1:
        row, col = 1, row
    else:
        col = 1
    if not (1 <= row <= rng.n_rows and 1 <= col <= rng.n_cols):
        return ErrorValue("#REF!")
    return rng.value_at(row, col)


def _fn_match(args):
    lookup = to_scalar(args[0])
    vector = args[1]
    if not isinstance(vector, RangeOperand) or not vector.is_vector():
        return VALUE_ERROR
    members = vector.vector()
    match_type = 1
    if len(args) > 2:
        mode = to_number(args[2])
        if isinstance(mode, ErrorValue):
            return mode
        match_type = int(mode) if mode == int(mode) else (1 if mode > 0 else -1)
    if match_type == 0:
        for i, member in enumerate(members):
            if values_equal(member, lookup):
                return float(i + 1)
        return NA_ERROR
    if match_type > 0:
        best = _lookup_scan_approximate(members, lookup)
        return NA_ERROR if best is None else float(best + 1)
    # match_type < 0: smallest member >= lookup, assuming descending order
    best = None
    for i, member in enumerate(members):
        if is_blank(member) or _type_rank(member) != _type_rank(lookup):
            continue
        if values_equal(member, lookup) or values_less(lookup, member):
            best = i
    return NA_ERROR if best is None else float(best + 1)


# --- text / finance -----------------------------------------------------------


def _fn_concat(args):
    parts: list[str] = []
    for arg in args:
        if isinstance(arg, RangeOperand):
            for value in arg.iter_all():
                text = to_text(value)
                if isinstance(text, ErrorValue):
                    return text
                parts.append(text)
        else:
            text = to_text(arg)
            if isinstance(text, ErrorValue):
                return text
            parts.append(text)
    return "".join(parts)


def _fn_text(args):
    # Numeric passthrough: the format string is accepted and ignored.
    return to_scalar(args[0])


def _flatten_numbers_ordered(args) -> list[float] | ErrorValue:
    out: list[float] = []
    for arg in args:
        if isinstance(arg, RangeOperand):
            for value in arg.iter_all():
                if is_number(value):
                    out.append(value)
        else:
            number = to_number(arg)
            if isinstance(number, ErrorValue):
                return number
            out.append(number)
    return out


def _fn_npv(args):
    rate = to_number(args[0])
    if isinstance(rate, ErrorValue):
        return rate
    if rate == -1.0:
        return DIV0_ERROR
    values = _flatten_numbers_ordered(args[1:])
    if isinstance(values, ErrorValue):
        return values
    total = 0.0
    for i, value in enumerate(values, start=1):
        total += value / (1.0 + rate) ** i
    return _numeric_result(total)


IRR_LOW = -0.9999
IRR_HIGH = 10.0
IRR_TOL = 1e-9


def _fn_irr(args):
    values = _flatten_numbers_ordered(args[:1])
    if isinstance(values, ErrorValue):
        return values
    if not any(v > 0 for v in values) or not any(v < 0 for v in values):
        return VALUE_ERROR

    def npv_at(rate: float) -> float:
        return sum(v / (1.0 + rate) ** i for i, v in enumerate(values))

    lo, hi = IRR_LOW, IRR_HIGH
    f_lo, f_hi = npv_at(lo), npv_at(hi)
    if f_lo == 0.0:
        return lo
    if f_hi == 0.0:
        return hi
    if (f_lo > 0) == (f_hi > 0):
        return VALUE_ERROR
    for _ in range(200):
        mid = (lo + hi) / 2.0
        f_mid = npv_at(mid)
        if f_mid == 0.0 or (hi - lo) / 2.0 < IRR_TOL:
            return mid
        if (f_mid > 0) == (f_lo > 0):
            lo, f_lo = mid, f_mid
        else:
            hi = mid
    return (lo + hi) / 2.0


def _fn_pmt(args):
    rate = to_number(args[0])
    if isinstance(rate, ErrorValue):
        return rate
    nper = to_number(args[1])
    if isinstance(nper, ErrorValue):
        return nper
    pv = to_number(args[2])
    if isinstance(pv, ErrorValue):
        return pv
    fv = 0.0
    if len(args) > 3:
        fv = to_number(args[3])
        if isinstance(fv, ErrorValue):
            return fv
    when = 0.0
    if len(args) > 4:
        when = to_number(args[4])
        if isinstance(when, ErrorValue):
            return when
    if nper == 0.0:
        return DIV0_ERROR
    if rate == 0.0:
        return _numeric_result(-(pv + fv) / nper)
    growth = (1.0 + rate) ** nper
    denominator = (growth - 1.0) * (1.0 + rate * when)
    if denominator == 0.0:
        return DIV0_ERROR
    return _numeric_result(-(pv * growth + fv) * rate / denominator)


# name -> (min_args, max_args, implementation); max_args None = variadic
FUNCTIONS: dict[str, tuple[int, int | None, Callable]] = {
    "SUM": (1, None, _fn_sum),
    "AVERAGE": (1, None, _fn_average),
    "MIN": (1, None, _fn_min),
    "MAX": (1, None, _fn_max),
    "COUNT": (1, None, _fn_count),
    "COUNTA": (1, None, _fn_counta),
    "ROUND": (1, 2, _fn_round),
    "ABS": (1, 1, _fn_abs),
    "SQRT": (1, 1, _fn_sqrt),
    "POWER": (2, 2, _fn_power),
    "AND": (1, None, _fn_and),
    "OR": (1, None, _fn_or),
    "NOT": (1, 1, _fn_not),
    "IF": (2, 3, _fn_if),
    "IFS": (2, None, _fn_ifs),
    "IFERROR": (2, 2, _fn_iferror),
    "SWITCH": (3, None, _fn_switch),
    "SUMIF": (2, 3, _fn_sumif),
    "SUMIFS": (3, None, _fn_sumifs),
    "COUNTIF": (2, 2, _fn_countif),
    "COUNTIFS": (2, None, _fn_countifs),
    "AVERAGEIF": (2, 3, _fn_averageif),
    "AVERAGEIFS": (3, None, _fn_averageifs),
    "VLOOKUP": (3, 4, _fn_vlookup),
    "HLOOKUP": (3, 4, _fn_hlookup),
    "LOOKUP": (2, 3, _fn_lookup),
    "XLOOKUP": (3, 6, _fn_xlookup),
    "INDEX": (2, 3, _fn_index),
    "MATCH": (2, 3, _fn_match),
    "CONCAT": (1, None, _fn_concat),
    "CONCATENATE": (1, None, _fn_concat),
    "TEXT": (1, 2, _fn_text),
    "NPV": (2, None, _fn_npv),
    "IRR": (1, 2, _fn_irr),
    "PMT": (3, 5, _fn_pmt),
}

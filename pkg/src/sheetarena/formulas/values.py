"""Runtime values produced by formula evaluation.

A cell value is one of: float (number), str (text), bool, the BLANK
singleton, or an ErrorValue carrying one of the six error codes.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

ERROR_CODES = ("#REF!", "#DIV/0!", "#NAME?", "#VALUE!", "#N/A", "#CIRC!")


@dataclass(frozen=True)
class ErrorValue:
    code: str

    def __post_init__(self) -> None:
        if self.code not in ERROR_CODES:
            raise ValueError(f"unknown error code {self.code!r}")

    def __str__(self) -> str:
        return self.code


class _Blank:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "BLANK"

    def __eq__(self, other) -> bool:
        return isinstance(other, _Blank)

    def __hash__(self) -> int:
        return hash("_Blank")


BLANK = _Blank()

REF_ERROR = ErrorValue("#REF!")
DIV0_ERROR = ErrorValue("#DIV/0!")
NAME_ERROR = ErrorValue("#NAME?")
VALUE_ERROR = ErrorValue("#VALUE!")
NA_ERROR = ErrorValue("#N/A")
CIRC_ERROR = ErrorValue("#CIRC!")

CellValue = Union[float, str, bool, _Blank, ErrorValue]


def is_error(value: CellValue) -> bool:
    return isinstance(value, ErrorValue)


def is_number(value: CellValue) -> bool:
    return isinstance(value, float) and not isinstance(value, bool)


def is_blank(value: CellValue) -> bool:
    return isinstance(value, _Blank)


def value_to_json(value: CellValue) -> dict:
    """JSON shape used by the HTTP API: {"value": ...} or {"error": code}."""
    if isinstance(value, ErrorValue):
        return {"error": value.code}
    if isinstance(value, _Blank):
        return {"value": None}
    return {"value": value}

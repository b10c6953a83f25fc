"""Lexer and recursive-descent parser for A1 formulas.

Grammar (precedence, loosest first): comparisons, ``&``, ``+ -``, ``* /``,
``^`` (left-associative), prefix ``- +``. Unary minus binds tighter than
``^`` so ``-2^2`` parses as ``(-2)^2``, matching spreadsheet convention.
Function names are case-insensitive and normalized to uppercase; argument
separators are commas.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from ..errors import FormulaSyntaxError
from ..sheetspec.addresses import CellAddress, ColumnSpan, RangeRef, RowSpan, col_to_index
from .ast import Binary, Boolean, Call, CellRef, Expr, Name, Number, RangeArea, Text, Unary

_CELL_TOKEN_RE = re.compile(r"^\$?([A-Za-z]{1,3})\$?([1-9][0-9]*)$")
_COL_TOKEN_RE = re.compile(r"^\$?([A-Za-z]{1,3})\$?$")
_NUMBER_RE = re.compile(r"[0-9]*\.?[0-9]+(?:[eE][+-]?[0-9]+)?")
_IDENT_RE = re.compile(r"[A-Za-z_$][A-Za-z0-9_.$]*")


@dataclass(frozen=True)
class _Token:
    kind: str  # number | string | ident | sheet | op | lparen | rparen | comma | colon | eof
    value: str
    offset: int


_TWO_CHAR_OPS = ("<>", "<=", ">=")
_ONE_CHAR_OPS = "=<>&+-*/^"


def _lex(source: str, start: int = 0) -> list[_Token]:
    tokens: list[_Token] = []
    i = start
    n = len(source)
    while i < n:
        ch = source[i]
        if ch in " \t\r\n":
            i += 1
            continue
        if ch == '"':
            j = i + 1
            parts: list[str] = []
            while True:
                if j >= n:
                    raise FormulaSyntaxError("unterminated string literal", i)
                if source[j] == '"':
                    if j + 1 < n and source[j + 1] == '"':  # doubled quote escape
                        parts.append('"')
                        j += 2
                        continue
                    break
                parts.append(source[j])
                j += 1
            tokens.append(_Token("string", "".join(parts), i))
            i = j + 1
            continue
        if ch == "'":
            j = i + 1
            parts = []
            while True:
                if j >= n:
                    raise FormulaSyntaxError("unterminated sheet name quote", i)
                if source[j] == "'":
                    if j + 1 < n and source[j + 1] == "'":
                        parts.append("'")
                        j += 2
                        continue
                    break
                parts.append(source[j])
                j += 1
            if j + 1 >= n or source[j + 1] != "!":
                raise FormulaSyntaxError("quoted sheet name must be followed by '!'", i)
            tokens.append(_Token("sheet", "".join(parts), i))
            i = j + 2
            continue
        if ch.isdigit() or (ch == "." and i + 1 < n and source[i + 1].isdigit()):
            m = _NUMBER_RE.match(source, i)
            assert m is not None
            tokens.append(_Token("number", m.group(0), i))
            i = m.end()
            continue
        if source.startswith(_TWO_CHAR_OPS[0], i) or source.startswith(
            _TWO_CHAR_OPS[1], i
        ) or source.startswith(_TWO_CHAR_OPS[2], i):
            tokens.append(_Token("op", source[i : i + 2], i))
            i += 2
            continue
        if ch in _ONE_CHAR_OPS:
            tokens.append(_Token("op", ch, i))
            i += 1
            continue
        if ch == "(":
            tokens.append(_Token("lparen", ch, i))
            i += 1
            continue
        if ch == ")":
            tokens.append(_Token("rparen", ch, i))
            i += 1
            continue
        if ch == ",":
            tokens.append(_Token("comma", ch, i))
            i += 1
            continue
        if ch == ":":
            tokens.append(_Token("colon", ch, i))
            i += 1
            continue
        m = _IDENT_RE.match(source, i)
        if m:
            text = m.group(0)
            # Unquoted sheet qualifier: IDENT immediately followed by "!".
            if m.end() < n and source[m.end()] == "!":
                tokens.append(_Token("sheet", text, i))
                i = m.end() + 1
                continue
            tokens.append(_Token("ident", text, i))
            i = m.end()
            continue
        raise FormulaSyntaxError(f"unexpected character {ch!r}", i)
    tokens.append(_Token("eof", "", n))
    return tokens


class _Parser:
    def __init__(self, tokens: list[_Token]):
        self.tokens = tokens
        self.pos = 0

    def peek(self) -> _Token:
        return self.tokens[self.pos]

    def advance(self) -> _Token:
        token = self.tokens[self.pos]
        self.pos += 1
        return token

    def expect(self, kind: str) -> _Token:
        token = self.peek()
        if token.kind != kind:
            raise FormulaSyntaxError(f"expected {kind}, got {token.value!r}", token.offset)
        return self.advance()

    # expression := comparison
    def expression(self) -> Expr:
        return self.comparison()

    def comparison(self) -> Expr:
        node = self.concat()
        while self.peek().kind == "op" and self.peek().value in ("=", "<>", "<", "<=", ">", ">="):
            op = self.advance().value
            node = Binary(op, node, self.concat())
        return node

    def concat(self) -> Expr:
        node = self.additive()
        while self.peek().kind == "op" and self.peek().value == "&":
            self.advance()
            node = Binary("&", node, self.additive())
        return node

    def additive(self) -> Expr:
        node = self.multiplicative()
        while self.peek().kind == "op" and self.peek().value in ("+", "-"):
            op = self.advance().value
            node = Binary(op, node, self.multiplicative())
        return node

    def multiplicative(self) -> Expr:
        node = self.exponent()
        while self.peek().kind == "op" and self.peek().value in ("*", "/"):
            op = self.advance().value
            node = Binary(op, node, self.exponent())
        return node

    def exponent(self) -> Expr:
        node = self.unary()
        while self.peek().kind == "op" and self.peek().value == "^":
            self.advance()
            node = Binary("^", node, self.unary())
        return node

    def unary(self) -> Expr:
        token = self.peek()
        if token.kind == "op" and token.value in ("-", "+"):
            self.advance()
            return Unary(token.value, self.unary())
        return self.atom()

    def atom(self) -> Expr:
        token = self.peek()
        if token.kind == "number":
            self.advance()
            if self.peek().kind == "colon":
                return self._row_span(token, sheet=None)
            return Number(float(token.value))
        if token.kind == "string":
            self.advance()
            return Text(token.value)
        if token.kind == "lparen":
            self.advance()
            node = self.expression()
            self.expect("rparen")
            return node
        if token.kind == "sheet":
            self.advance()
            return self._sheet_qualified(token)
        if token.kind == "ident":
            self.advance()
            return self._ident(token)
        raise FormulaSyntaxError(f"unexpected token {token.value!r}", token.offset)

    def _row_span(self, first: _Token, sheet: str | None) -> Expr:
        if "." in first.value or "e" in first.value.lower():
            raise FormulaSyntaxError("row reference must be an integer", first.offset)
        self.expect("colon")
        second = self.expect("number")
        if "." in second.value or "e" in second.value.lower():
            raise FormulaSyntaxError("row reference must be an integer", second.offset)
        a, b = int(first.value), int(second.value)
        return RangeArea(sheet, RowSpan(min(a, b), max(a, b)))

    def _sheet_qualified(self, sheet_token: _Token) -> Expr:
        token = self.peek()
        if token.kind == "number":
            self.advance()
            return self._row_span(token, sheet=sheet_token.value)
        if token.kind != "ident":
            raise FormulaSyntaxError("expected a reference after sheet qualifier", token.offset)
        self.advance()
        return self._ref_from_ident(token, sheet=sheet_token.value)

    def _ident(self, token: _Token) -> Expr:
        upper = token.value.upper()
        if self.peek().kind == "lparen":
            self.advance()
            args: list[Expr] = []
            if self.peek().kind != "rparen":
                args.append(self.expression())
                while self.peek().kind == "comma":
                    self.advance()
                    args.append(self.expression())
            self.expect("rparen")
            return Call(upper.replace("$", ""), tuple(args))
        if upper == "TRUE":
            return Boolean(True)
        if upper == "FALSE":
            return Boolean(False)
        return self._ref_from_ident(token, sheet=None)

    def _ref_from_ident(self, token: _Token, sheet: str | None) -> Expr:
        text = token.value
        if self.peek().kind == "colon":
            self.advance()
            second = self.expect("ident")
            first_cell = _CELL_TOKEN_RE.match(text)
            second_cell = _CELL_TOKEN_RE.match(second.value)
            if first_cell and second_cell:
                start = CellAddress(int(first_cell.group(2)), col_to_index(first_cell.group(1)))
                end = CellAddress(int(second_cell.group(2)), col_to_index(second_cell.group(1)))
                return RangeArea(sheet, RangeRef(start, end))
            first_col = _COL_TOKEN_RE.match(text)
            second_col = _COL_TOKEN_RE.match(second.value)
            if first_col and second_col:
                a = col_to_index(first_col.group(1))
                b = col_to_index(second_col.group(1))
                return RangeArea(sheet, ColumnSpan(min(a, b), max(a, b)))
            raise FormulaSyntaxError(
                f"invalid range {text!r}:{second.value!r}", token.offset
            )
        m = _CELL_TOKEN_RE.match(text)
        if m:
            return CellRef(sheet, CellAddress(int(m.group(2)), col_to_index(m.group(1))))
        if sheet is not None:
            raise FormulaSyntaxError(f"invalid reference {text!r}", token.offset)
        if "$" in text:
            raise FormulaSyntaxError(f"invalid reference {text!r}", token.offset)
        return Name(text)


def parse_formula(source: str) -> Expr:
    """Parse a formula (leading "=" required) into an expression tree.

    Raises FormulaSyntaxError with a byte offset on unbalanced parens,
    bad tokens, or trailing garbage.
    """
    if not source.startswith("="):
        raise FormulaSyntaxError('formula must start with "="', 0)
    if not source[1:].strip():
        raise FormulaSyntaxError("empty formula", 1)
    tokens = _lex(source, start=1)  # offsets are positions in the full source
    parser = _Parser(tokens)
    expr = parser.expression()
    trailing = parser.peek()
    if trailing.kind != "eof":
        raise FormulaSyntaxError(f"trailing input {trailing.value!r}", trailing.offset)
    return expr

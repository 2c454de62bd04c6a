"""Parser for element and polynomial literals such as ``(i+j)/sqrt2`` or ``z^2*i + 3``.

Grammar (juxtaposition multiplies)::

    expr   := term (('+' | '-') term)*
    term   := factor (('*' | '/')? factor)*
    factor := ('-' | '+') factor | power
    power  := atom ('^' integer)?
    atom   := number | sqrt atom | name | '(' expr ')'

Values are right-coefficient polynomials in a variable that commutes with
the coefficients, so products are star products.  Plain element literals
are the degree-zero case.
"""
from __future__ import annotations

import re

import numpy as np

from .algebra import Algebra, Element

_NUMBER = re.compile(r"\d+(?:\.\d*)?|\.\d+")
_NUMBER_EXP = re.compile(r"(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?")
_SQRT = ("sqrt", "√")
_MINUS = {"−": "-", "–": "-"}


class LiteralError(ValueError):
    """Malformed literal; the message names the offending position."""


def _star(p: np.ndarray, q: np.ndarray, algebra: Algebra) -> np.ndarray:
    out = np.zeros((len(p) + len(q) - 1, algebra.dim))
    for k in range(len(p)):
        out[k: k + len(q)] += algebra.mul_arrays(np.broadcast_to(p[k], q.shape), q)
    return out


class _Parser:
    def __init__(self, text: str, algebra: Algebra, symbols: dict[str, Element], variables: tuple[str, ...]):
        for u, a in _MINUS.items():
            text = text.replace(u, a)
        self.text = text
        self.pos = 0
        self.alg = algebra
        names = {n: algebra.basis(k).coeffs for k, n in enumerate(algebra.basis_names)}
        names.update({n: e.coeffs for n, e in symbols.items()})
        self.names = names
        self.variables = variables
        # longest match first so "ij" wins over "i"
        self.keys = sorted(list(names) + list(variables) + list(_SQRT), key=len, reverse=True)
        starts_e = any(n[:1] in "eE" for n in names)
        self.number = _NUMBER if starts_e else _NUMBER_EXP

    # -- helpers
    def _skip(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def _peek(self) -> str:
        self._skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def _fail(self, msg: str):
        raise LiteralError(f"{msg} at position {self.pos} in {self.text!r}")

    def _const(self, c: np.ndarray) -> np.ndarray:
        return np.asarray(c, dtype=float)[None, :].copy()

    def _scalar(self, v: float) -> np.ndarray:
        out = np.zeros((1, self.alg.dim))
        out[0, 0] = v
        return out

    @staticmethod
    def _real_value(p: np.ndarray):
        if len(p) == 1 and not np.any(p[0, 1:]):
            return float(p[0, 0])
        return None

    # -- grammar
    def parse(self) -> np.ndarray:
        v = self.expr()
        if self._peek():
            self._fail(f"unexpected {self._peek()!r}")
        return v

    def expr(self) -> np.ndarray:
        v = self.term()
        while self._peek() in ("+", "-"):
            op = self.text[self.pos]
            self.pos += 1
            w = self.term()
            n = max(len(v), len(w))
            v = np.pad(v, ((0, n - len(v)), (0, 0)))
            w = np.pad(w, ((0, n - len(w)), (0, 0)))
            v = v + w if op == "+" else v - w
        return v

    def _starts_factor(self) -> bool:
        c = self._peek()
        if not c or c in "+-*/)^":
            return False
        return True

    def term(self) -> np.ndarray:
        v = self.factor()
        while True:
            c = self._peek()
            if c == "*":
                self.pos += 1
                v = _star(v, self.factor(), self.alg)
            elif c == "/":
                self.pos += 1
                d = self._real_value(self.factor())
                if d is None:
                    self._fail("division is only by real scalars")
                if d == 0:
                    self._fail("division by zero")
                v = v / d
            elif self._starts_factor():
                v = _star(v, self.power(), self.alg)
            else:
                return v

    def factor(self) -> np.ndarray:
        c = self._peek()
        if c == "-":
            self.pos += 1
            return -self.factor()
        if c == "+":
            self.pos += 1
            return self.factor()
        return self.power()

    def power(self) -> np.ndarray:
        base = self.atom()
        if self._peek() == "^":
            self.pos += 1
            self._skip()
            m = re.compile(r"\d+").match(self.text, self.pos)
            if not m:
                self._fail("exponent must be a non-negative integer")
            self.pos = m.end()
            out = self._scalar(1.0)
            for _ in range(int(m.group())):
                out = _star(out, base, self.alg)
            return out
        return base

    def atom(self) -> np.ndarray:
        c = self._peek()
        if c == "(":
            self.pos += 1
            v = self.expr()
            if self._peek() != ")":
                self._fail("missing ')'")
            self.pos += 1
            return v
        m = self.number.match(self.text, self.pos)
        if m:
            self.pos = m.end()
            return self._scalar(float(m.group()))
        for key in self.keys:
            if self.text.startswith(key, self.pos):
                self.pos += len(key)
                if key in _SQRT:
                    arg = self._real_value(self.atom())
                    if arg is None or arg < 0:
                        self._fail("sqrt needs a non-negative real argument")
                    return self._scalar(float(np.sqrt(arg)))
                if key in self.variables:
                    out = np.zeros((2, self.alg.dim))
                    out[1, 0] = 1.0
                    return out
                return self._const(self.names[key])
        self._fail("expected a number, name or '('")


def parse_element(text: str, algebra: Algebra, symbols: dict[str, Element] | None = None) -> Element:
    """Element literal over ``algebra``; ``symbols`` adds named elements (e.g. ``J``)."""
    p = _Parser(text, algebra, symbols or {}, ()).parse()
    return Element(algebra, p[0])


def parse_polynomial(text: str, algebra: Algebra, symbols: dict[str, Element] | None = None,
                     variables: tuple[str, ...] = ("z", "x")) -> np.ndarray:
    """Coefficient array ``(degree+1, dim)`` of a right-coefficient polynomial literal."""
    reserved = set(variables) & set(algebra.basis_names)
    if reserved:
        raise LiteralError(f"variable names {sorted(reserved)} clash with basis names")
    p = _Parser(text, algebra, symbols or {}, variables).parse()
    # trim trailing zero coefficients but keep the constant term
    while len(p) > 1 and not np.any(p[-1]):
        p = p[:-1]
    return p

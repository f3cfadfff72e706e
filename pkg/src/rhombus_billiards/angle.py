"""Angle expressions: ``pi/5``, ``0.7``, ``2*pi/7 + 1/3``.

Every accepted expression is affine in pi with rational coefficients, so an
angle is stored exactly as ``pi_coeff * pi + const``.  That form is what the
exact zero test in :mod:`rhombus_billiards.exact` relies on.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from decimal import Decimal
from fractions import Fraction

from .errors import ParseError

PI_MULTIPLE = "rational-multiple-of-pi"
DECIMAL = "decimal-literal"
EXPRESSION = "expression"

_TOKEN = re.compile(r"\s*(?:(?P<num>\d+(?:\.\d*)?(?:[eE][+-]?\d+)?|\.\d+(?:[eE][+-]?\d+)?)"
                    r"|(?P<pi>pi|π)|(?P<op>[-+*/()]))")


@dataclass(frozen=True)
class AngleSpec:
    pi_coeff: Fraction
    const: Fraction
    source: str = ""

    @property
    def kind(self) -> str:
        if self.const == 0 and self.pi_coeff != 0:
            return PI_MULTIPLE
        if self.pi_coeff == 0 and _is_terminating(self.const):
            return DECIMAL
        return EXPRESSION

    @property
    def canonical(self) -> str:
        parts = []
        if self.pi_coeff:
            parts.append(_format_pi(self.pi_coeff))
        if self.const or not parts:
            c = _format_rational(abs(self.const)) if parts else _format_rational(self.const)
            if parts:
                parts.append(("- " if self.const < 0 else "+ ") + c)
            else:
                parts.append(c)
        return " ".join(parts)

    def __float__(self) -> float:
        import math
        return float(self.pi_coeff) * math.pi + float(self.const)

    def __str__(self) -> str:
        return self.canonical

    def __eq__(self, other):
        if not isinstance(other, AngleSpec):
            return NotImplemented
        return (self.pi_coeff, self.const) == (other.pi_coeff, other.const)

    def __hash__(self):
        return hash((self.pi_coeff, self.const))

    def __add__(self, other: "AngleSpec") -> "AngleSpec":
        return AngleSpec(self.pi_coeff + other.pi_coeff, self.const + other.const)

    def __sub__(self, other: "AngleSpec") -> "AngleSpec":
        return AngleSpec(self.pi_coeff - other.pi_coeff, self.const - other.const)

    def scaled(self, q) -> "AngleSpec":
        q = Fraction(q)
        return AngleSpec(self.pi_coeff * q, self.const * q)

    def quarter_turns(self):
        """Return q if the angle is exactly q*pi/2, else None."""
        if self.const == 0 and (self.pi_coeff * 2).denominator == 1:
            return int(self.pi_coeff * 2) % 4
        return None


def angle(pi_coeff=0, const=0) -> AngleSpec:
    return AngleSpec(Fraction(pi_coeff), Fraction(const))


PERPENDICULAR = angle(Fraction(1, 2))


def _is_terminating(q: Fraction) -> bool:
    d = q.denominator
    for p in (2, 5):
        while d % p == 0:
            d //= p
    return d == 1


def _format_rational(q: Fraction) -> str:
    if q.denominator == 1:
        return str(q.numerator)
    if _is_terminating(q):
        s = format(Decimal(q.numerator) / Decimal(q.denominator), "f")
        return s.rstrip("0").rstrip(".") if "." in s else s
    return f"{q.numerator}/{q.denominator}"


def _format_pi(q: Fraction) -> str:
    sign = "-" if q < 0 else ""
    q = abs(q)
    num = "pi" if q.numerator == 1 else f"{q.numerator}*pi"
    den = "" if q.denominator == 1 else f"/{q.denominator}"
    return f"{sign}{num}{den}"


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = []
        pos = 0
        stripped = text.rstrip()
        while pos < len(stripped):
            m = _TOKEN.match(stripped, pos)
            if not m:
                bad = pos + len(stripped[pos:]) - len(stripped[pos:].lstrip())
                raise ParseError(f"unexpected character {stripped[bad]!r}", text, bad)
            start = m.start(m.lastgroup)
            self.tokens.append((m.lastgroup, m.group(m.lastgroup), start))
            pos = m.end()
        self.i = 0

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else (None, None, len(self.text))

    def take(self):
        tok = self.peek()
        self.i += 1
        return tok

    def parse(self):
        if not self.tokens:
            raise ParseError("empty angle expression", self.text, 0)
        value = self.expr()
        kind, tok, pos = self.peek()
        if kind is not None:
            raise ParseError(f"unexpected {tok!r}", self.text, pos)
        return value

    def expr(self):
        a = self.term()
        while self.peek()[1] in ("+", "-"):
            _, op, _ = self.take()
            b = self.term()
            a = (a[0] + b[0], a[1] + b[1]) if op == "+" else (a[0] - b[0], a[1] - b[1])
        return a

    def term(self):
        a = self.unary()
        while self.peek()[1] in ("*", "/"):
            _, op, pos = self.take()
            b = self.unary()
            if op == "*":
                if a[0] and b[0]:
                    raise ParseError("expression is not affine in pi", self.text, pos)
                a = (a[0] * b[1] + b[0] * a[1], a[1] * b[1])
            else:
                if b[0]:
                    raise ParseError("division by a multiple of pi", self.text, pos)
                if b[1] == 0:
                    raise ParseError("division by zero", self.text, pos)
                a = (a[0] / b[1], a[1] / b[1])
        return a

    def unary(self):
        if self.peek()[1] in ("+", "-"):
            _, op, _ = self.take()
            a = self.unary()
            return a if op == "+" else (-a[0], -a[1])
        return self.atom()

    def atom(self):
        kind, tok, pos = self.take()
        if kind == "num":
            return (Fraction(0), Fraction(Decimal(tok)))
        if kind == "pi":
            return (Fraction(1), Fraction(0))
        if tok == "(":
            a = self.expr()
            k2, t2, p2 = self.take()
            if t2 != ")":
                raise ParseError("expected ')'", self.text, p2)
            return a
        if kind is None:
            raise ParseError("unexpected end of expression", self.text, pos)
        raise ParseError(f"unexpected {tok!r}", self.text, pos)


def parse_angle(text: str) -> AngleSpec:
    """Parse an angle expression; raises :class:`ParseError` with the offending position."""
    if isinstance(text, AngleSpec):
        return text
    if not isinstance(text, str):
        raise ParseError(f"expected a string, got {type(text).__name__}")
    pi_coeff, const = _Parser(text).parse()
    return AngleSpec(pi_coeff, const, text)

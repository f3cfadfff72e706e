"""Integer level codes and the predicates used on them."""

from __future__ import annotations

import re
from typing import Iterable, Sequence

from .errors import MalformedCode, ParseError

RETURNING_UP = "ReturningUp"
RETURNING_DOWN = "ReturningDown"
ESCAPES_UP = "EscapesUp"
ESCAPES_DOWN = "EscapesDown"
INTERIOR = "Interior"


class Code(tuple):
    """Level sequence ``a_0 .. a_p``; adjacent entries differ by exactly one.

    >>> c = Code([0, 1, 2, 1, 0])
    >>> c.p, str(c)
    (4, '0 1 2 1 0')
    """

    def __new__(cls, entries: Iterable[int] = ()):
        entries = tuple(int(a) for a in entries)
        if not entries:
            raise MalformedCode("a code needs at least one entry")
        for a, b in zip(entries, entries[1:]):
            if abs(a - b) != 1:
                raise MalformedCode(f"adjacent entries {a}, {b} do not differ by one")
        return super().__new__(cls, entries)

    @property
    def p(self) -> int:
        return len(self) - 1

    def __str__(self):
        return format_code(self)

    def __repr__(self):
        return f"Code('{format_code(self)}')"


def format_code(code: Sequence[int]) -> str:
    return " ".join(f"({a})" if a < 0 else str(a) for a in code)


_CODE_TOKEN = re.compile(r"\s*(\(\s*-?\d+\s*\)|-?\d+)")


def parse_code(text: str) -> Code:
    """Inverse of :func:`format_code`; also accepts compact digit strings like ``0121210``."""
    text = text.strip()
    if re.fullmatch(r"\d+", text):
        return Code(int(ch) for ch in text)
    out = []
    pos = 0
    while pos < len(text):
        m = _CODE_TOKEN.match(text, pos)
        if not m:
            raise ParseError("bad code token", text, pos)
        out.append(int(m.group(1).strip("() ")))
        pos = m.end()
        while pos < len(text) and text[pos].isspace():
            pos += 1
    return Code(out)


def as_code(code) -> Code:
    if isinstance(code, Code):
        return code
    if isinstance(code, str):
        return parse_code(code)
    return Code(code)


def is_palindrome(code) -> bool:
    code = as_code(code)
    return tuple(code) == tuple(reversed(code))


def classify_code(code, band) -> str:
    """Classify a code against the band ``(M, N)`` with ``M <= 0 <= N``.

    The Up/Down part of the name is the direction of the first move.  A code
    from 0 that comes back to 0 strictly inside the band is returning; one
    that reaches the band edge escapes.  Codes anchored at a band edge are
    classified the same way relative to that edge, so ``N ... 0`` is
    ``EscapesDown`` and ``M ... 0`` is ``EscapesUp``.  Anything else, such as a
    truncated code, is ``Interior``.

    >>> classify_code("0121210", (0, 3))
    'ReturningUp'
    >>> classify_code("0 1", (0, 1))
    'EscapesUp'
    """
    code = as_code(code)
    M, N = band
    if not M <= 0 <= N or M == N:
        raise MalformedCode(f"band {band} must satisfy M <= 0 <= N")
    first, last = code[0], code[-1]
    if first not in (0, M, N):
        raise MalformedCode(f"code must start at 0 or at a band edge, got {first}")
    if code.p == 0:
        return INTERIOR
    up = code[1] > first
    if first == 0:
        lo, hi = (0, N) if up else (M, 0)
        target = hi if up else lo
    else:
        lo, hi = (M, 0) if first == M else (0, N)
        target = 0
    if not all(lo < a < hi for a in code[1:-1]):
        return INTERIOR
    if last == first:
        return RETURNING_UP if up else RETURNING_DOWN
    if last == target:
        return ESCAPES_UP if up else ESCAPES_DOWN
    return INTERIOR


def reverse_negate(code, anchor: bool = False) -> Code:
    """Reverse and negate.  With ``anchor`` the result is shifted to start at 0."""
    code = as_code(code)
    out = [-a for a in reversed(code)]
    if anchor:
        out = [a - out[0] for a in out]
    return Code(out)


def reverse(code) -> Code:
    return Code(reversed(as_code(code)))

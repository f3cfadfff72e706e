"""Interval exchange transformations and orbit tracking of intervals.

The code is generic in the number type: Fractions, floats and certified
:class:`~rhombus_billiards.exact.Real` values all work, because it only
adds, subtracts and compares.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Optional

PERIODIC = "periodic"
UNRESOLVED = "unresolved-minimal"
ESCAPE = "escape"


@dataclass(frozen=True)
class Piece:
    """``[lo, hi)`` moved by ``shift``; a ``shift`` of None marks a hole where the map is undefined."""

    lo: Any
    hi: Any
    shift: Any = None
    label: Any = None

    @property
    def length(self):
        return self.hi - self.lo

    @property
    def image(self):
        return (self.lo + self.shift, self.hi + self.shift)


def _zero_like(x):
    return x - x


class IET:
    """A (possibly partial) piecewise translation on an interval.

    >>> T = IET.from_permutation([Fraction(2, 3), Fraction(1, 3)], [1, 0])
    >>> T(Fraction(0)), T(Fraction(5, 6))
    (Fraction(1, 3), Fraction(1, 6))
    """

    def __init__(self, pieces):
        self.pieces = list(pieces)
        if not self.pieces:
            raise ValueError("an IET needs at least one piece")

    @classmethod
    def from_permutation(cls, lengths, perm, start=None) -> "IET":
        """Pieces of the given lengths, reordered so that piece ``i`` lands in slot ``perm[i]``."""
        start = start if start is not None else _zero_like(lengths[0])
        top = []
        pos = start
        for lam in lengths:
            top.append(pos)
            pos = pos + lam
        order = sorted(range(len(lengths)), key=lambda i: perm[i])
        bottom = {}
        pos = start
        for i in order:
            bottom[i] = pos
            pos = pos + lengths[i]
        return cls(Piece(top[i], top[i] + lengths[i], bottom[i] - top[i], i) for i in range(len(lengths)))

    @property
    def domain(self):
        return (self.pieces[0].lo, self.pieces[-1].hi)

    @property
    def total_length(self):
        return self.pieces[-1].hi - self.pieces[0].lo

    def locate(self, x) -> Optional[int]:
        for i, p in enumerate(self.pieces):
            if p.lo <= x < p.hi:
                return i
        return None

    def __call__(self, x):
        i = self.locate(x)
        if i is None or self.pieces[i].shift is None:
            raise ValueError("point outside the domain of the map")
        return x + self.pieces[i].shift

    def is_total(self) -> bool:
        return all(p.shift is not None for p in self.pieces)

    def is_length_preserving(self) -> bool:
        """Images of the pieces tile the domain exactly (only meaningful for total maps)."""
        if not self.is_total():
            return False
        imgs = sorted((p.image for p in self.pieces), key=lambda ab: float(ab[0]))
        lo, hi = self.domain
        pos = lo
        for a, b in imgs:
            if not (a - pos) == 0:
                return False
            pos = b
        return (pos - hi) == 0


@dataclass
class Fate:
    """Outcome for the subinterval ``[lo, hi)`` of the starting domain."""

    lo: Any
    hi: Any
    kind: str
    steps: int
    orbit: list = field(default_factory=list)


def track(pieces, lo, hi, max_iter: int = 200, max_pieces: int = 20_000) -> list:
    """Follow ``[lo, hi)`` forward under the partial map given by ``pieces``.

    Subintervals whose accumulated shift becomes exactly zero are periodic
    (every point is fixed by the iterate); those that fall into a hole
    escape; the rest are unresolved after ``max_iter`` steps.  Results are
    sorted by position.
    """
    zero = _zero_like(lo)
    work = [(lo, hi, zero, 0, [])]
    out = []
    budget = max_pieces
    while work:
        a, b, s, n, orbit = work.pop()
        if n > 0 and s == 0:
            out.append(Fate(a, b, PERIODIC, n, orbit))
            continue
        if n >= max_iter or budget <= 0:
            out.append(Fate(a, b, UNRESOLVED, n, orbit))
            continue
        budget -= 1
        ca, cb = a + s, b + s
        for p in pieces:
            if not (p.lo < cb and ca < p.hi):
                continue
            x0 = p.lo if p.lo > ca else ca
            x1 = p.hi if p.hi < cb else cb
            if p.shift is None:
                out.append(Fate(x0 - s, x1 - s, ESCAPE, n + 1, orbit + [p.label]))
            else:
                work.append((x0 - s, x1 - s, s + p.shift, n + 1, orbit + [p.label]))
    out.sort(key=lambda f: float(f.lo))
    return out


@dataclass
class Component:
    kind: str
    period: Optional[int]
    intervals: list
    iterations: int = 0


def iet_classify(iet: IET, max_iter: int = 200, max_pieces: int = 20_000) -> list:
    """Split the domain into periodic components and unresolved remainders.

    Periodic components are certified by an exact zero total shift.  The
    remainder is labelled unresolved-minimal with the iteration count; no
    finite computation certifies minimality.
    """
    fates = []
    for p in iet.pieces:
        fates += track(iet.pieces, p.lo, p.hi, max_iter, max_pieces)
    fates.sort(key=lambda f: float(f.lo))
    comps = []
    for f in fates:
        kind = f.kind
        period = f.steps if kind == PERIODIC else None
        last = comps[-1] if comps else None
        if last and last.kind == kind and last.period == period and (last.intervals[-1][1] - f.lo) == 0:
            last.intervals[-1] = (last.intervals[-1][0], f.hi)
        else:
            comps.append(Component(kind, period, [(f.lo, f.hi)], f.steps))
    return comps


def rotation(shift, length=None) -> IET:
    """Rotation of ``[0, length)`` by ``shift`` as a two-interval exchange."""
    one = length if length is not None else _zero_like(shift) + 1
    return IET.from_permutation([one - shift, shift], [1, 0])

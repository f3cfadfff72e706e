"""Escape brackets and coverage by returning beams, perpendicular direction."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import gmpy2

from ..beams import S0_MINUS, S0_PLUS, BeamSet, decompose_band, find_exceptional
from ..exact import Real
from ..geometry import BUDGET, RETURNED, TriangleConfig

_BEAM_CACHE = {}


def cached_band(cfg: TriangleConfig, M: int, N: int) -> BeamSet:
    """Band decompositions are pure functions of their inputs, so they are memoized per process."""
    key = (cfg, M, N)
    hit = _BEAM_CACHE.get(key)
    if hit is None:
        hit = decompose_band(cfg, M, N)
        _BEAM_CACHE[key] = hit
    return hit


@dataclass
class BracketEntry:
    N: int
    lo: Real
    hi: Real
    code: object

    @property
    def width(self) -> Real:
        return self.hi - self.lo


@dataclass
class EscapeBracketSeq:
    side: str
    entries: list = field(default_factory=list)

    def nested(self) -> list:
        """``interval(N+1) ⊆ interval(N)`` for consecutive entries, certified."""
        return [b.lo >= a.lo and b.hi <= a.hi for a, b in zip(self.entries, self.entries[1:])]

    def proper(self) -> list:
        """Whether each inclusion is proper (the interval actually shrinks)."""
        return [b.width < a.width for a, b in zip(self.entries, self.entries[1:])]

    def widths_nonincreasing(self) -> bool:
        return all(b.width <= a.width for a, b in zip(self.entries, self.entries[1:]))

    def widths(self) -> list:
        return [float(e.width) for e in self.entries]

    @property
    def last(self) -> Optional[BracketEntry]:
        return self.entries[-1] if self.entries else None


def escape_bracket(cfg: TriangleConfig, N_max: int, side: str = "positive", N_min: int = 1) -> EscapeBracketSeq:
    """Initial intervals of the unique beam crossing the band ``0..N`` for ``N = N_min..N_max``.

    ``side='negative'`` uses the bands ``-N..0`` instead.
    """
    seq = EscapeBracketSeq(side)
    for n in range(N_min, N_max + 1):
        bs = cached_band(cfg, 0, n) if side == "positive" else cached_band(cfg, -n, 0)
        ex = find_exceptional(bs, side)
        seq.entries.append(BracketEntry(n, ex.up.lo, ex.up.hi, ex.up.code))
    return seq


@dataclass
class Coverage:
    N: int
    returning_width: Real
    escaping_width: Real
    unresolved_width: Real
    total: Real

    @property
    def fraction(self) -> float:
        """Certified lower bound on the covered share of L."""
        return self.enclosure()[0]

    def enclosure(self, prec: int = 128) -> tuple:
        """Certified bounds on the covered fraction."""
        f = self.total.field
        rl, rh = f.enclose(self.returning_width, prec)
        tl, th = f.enclose(self.total, prec)
        # dividing straight into 53 bits keeps the float bounds outward rounded
        down = gmpy2.context(precision=53, round=gmpy2.RoundDown)
        up = gmpy2.context(precision=53, round=gmpy2.RoundUp)
        return float(down.div(rl, th)), float(up.div(rh, tl))

    @property
    def unresolved_fraction(self) -> float:
        return float(self.unresolved_width) / float(self.total)

    @property
    def escaping_fraction(self) -> float:
        return float(self.escaping_width) / float(self.total)


def coverage_fraction(cfg: TriangleConfig, N: int) -> Coverage:
    """Share of L covered by beams that return to level 0 inside the band ``-N..N``.

    Those beams are periodic.  The rest of L is the two exceptional beams
    (the escape brackets) plus finitely many singular points.
    """
    bs = cached_band(cfg, -N, N)
    f = cfg.field
    ret, esc, unres = f.zero(), f.zero(), f.zero()
    for b in bs.side(S0_PLUS, S0_MINUS):
        if b.terminal == RETURNED:
            ret = ret + b.width
        elif b.terminal == BUDGET:
            unres = unres + b.width
        else:
            esc = esc + b.width
    return Coverage(N, ret, esc, unres, cfg.diagonal_length)

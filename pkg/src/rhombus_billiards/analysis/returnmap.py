"""First return to level 0 inside a band, its P/M/U partition and the ghost completion.

Level 0 is the copy of the base rhombus with center 0.  A ray is identified
by its transverse coordinate, which ranges over the transverse extent of that
copy; for the perpendicular direction this is L itself.  The first return
map translates each returning beam, and it is undefined on beams that reach
the band edge first.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from ..angle import PERPENDICULAR, AngleSpec, parse_angle
from ..beams import propagate_beam
from ..coding import Code
from ..errors import LengthMismatch, Undecided
from ..exact import Real
from ..geometry import BUDGET, RETURNED, StopRule, TriangleConfig, heading
from .iet import ESCAPE, IET, PERIODIC, UNRESOLVED, Piece, iet_classify, track

P_CLASS = "P"
M_CLASS = "M"
U_CLASS = "U"
UNCLASSIFIED = "unclassified"

_FATE_TO_CLASS = {PERIODIC: P_CLASS, UNRESOLVED: M_CLASS, ESCAPE: U_CLASS}


@dataclass
class ReturnInterval:
    lo: Real
    hi: Real
    cls: str
    code: Optional[Code] = None
    shift: Optional[Real] = None
    period: Optional[int] = None
    beam_index: int = -1

    @property
    def width(self) -> Real:
        return self.hi - self.lo


@dataclass
class ReturnMapPartition:
    cfg: TriangleConfig
    theta0: AngleSpec
    band: tuple
    lo: Real
    hi: Real
    beams: list
    pieces: list
    intervals: list
    singular: list
    max_iter: int
    ghost: Optional[IET] = None
    simple_direction_assumed: bool = False

    @property
    def domain_D(self) -> list:
        return [(p.lo, p.hi) for p in self.pieces if p.shift is not None]

    def of_class(self, cls: str) -> list:
        return [iv for iv in self.intervals if iv.cls == cls]

    def class_width(self, cls: str) -> Real:
        total = self.cfg.field.zero()
        for iv in self.of_class(cls):
            total = total + iv.width
        return total

    @property
    def partial_map(self) -> IET:
        return IET(self.pieces)

    def true_return(self, x) -> Optional[Real]:
        """Image of ``x`` under the first return map, or None where it is undefined."""
        for p in self.pieces:
            if p.lo < x < p.hi:
                return None if p.shift is None else x + p.shift
        return None


def level_zero_range(cfg: TriangleConfig, theta0=PERPENDICULAR):
    shape = heading(cfg, theta0).shape(0)
    ts = list(shape.vertex_t.values())
    lo = ts[0]
    hi = ts[0]
    for t in ts[1:]:
        if t < lo:
            lo = t
        if t > hi:
            hi = t
    return lo, hi


def build_return_map(cfg: TriangleConfig, theta0=PERPENDICULAR, M: int = -1, N: int = 1, *,
                     max_iter: int = 100, max_steps: int = 100_000) -> ReturnMapPartition:
    """Partition level 0 into P (periodic), M (unresolved, possibly minimal) and U (escaping) intervals.

    Every beam that comes back to level 0 without touching ``M`` or ``N``
    defines one piece of the partial return map.  Subintervals are then
    followed under that map: an exact zero total shift makes them periodic,
    landing on a piece that reaches the band edge makes them U, and anything
    still open after ``max_iter`` returns is reported as M.
    """
    if not M < 0 < N:
        raise ValueError("band must satisfy M < 0 < N")
    theta0 = parse_angle(theta0) if isinstance(theta0, str) else theta0
    h = heading(cfg, theta0)
    lo, hi = level_zero_range(cfg, theta0)
    stop = StopRule(frozenset({M, 0, N}), 0, max_steps)
    beams = propagate_beam(cfg, (lo, hi), stop, direction=theta0)
    pieces = []
    for i, b in enumerate(beams):
        if b.terminal == RETURNED:
            pieces.append(Piece(b.lo, b.hi, -h.t(b.centers[-1]), i))
        else:
            pieces.append(Piece(b.lo, b.hi, None, i))
    intervals = []
    for i, b in enumerate(beams):
        if b.terminal == BUDGET:
            intervals.append(ReturnInterval(b.lo, b.hi, UNCLASSIFIED, b.code, None, None, i))
            continue
        if b.terminal != RETURNED:
            intervals.append(ReturnInterval(b.lo, b.hi, U_CLASS, b.code, None, None, i))
            continue
        for f in track(pieces, b.lo, b.hi, max_iter):
            cls = _FATE_TO_CLASS[f.kind]
            intervals.append(ReturnInterval(f.lo, f.hi, cls, b.code, pieces[i].shift,
                                            f.steps if f.kind == PERIODIC else None, i))
    singular = [b.lo for b in beams[1:]]
    part = ReturnMapPartition(cfg, theta0, (M, N), lo, hi, beams, pieces, intervals, singular, max_iter,
                              simple_direction_assumed=theta0.quarter_turns() is None)
    return part


def _sorted_exact(pairs):
    return sorted(pairs, key=lambda ab: float(ab[0]))


def gap_lengths(part: ReturnMapPartition):
    """Unmatched domain gaps (where the map is undefined) and unmatched range gaps."""
    dom = [(p.lo, p.hi) for p in part.pieces if p.shift is None]
    images = _sorted_exact([p.image for p in part.pieces if p.shift is not None])
    rng = []
    pos = part.lo
    for a, b in images:
        if (a - pos).sign() > 0:
            rng.append((pos, a))
        pos = b
    if (part.hi - pos).sign() > 0:
        rng.append((pos, part.hi))
    return dom, rng


def _total(pairs, zero):
    t = zero
    for a, b in pairs:
        t = t + (b - a)
    return t


def ghost_complete(part: ReturnMapPartition) -> IET:
    """Complete the partial return map to a full IET.

    The places where the map is undefined are laid end to end and sent, in
    the same order and orientation, onto the uncovered part of the range.
    The two total lengths must agree; a certified disagreement raises
    :class:`LengthMismatch`.
    """
    zero = part.cfg.field.zero()
    dom, rng = gap_lengths(part)
    diff = _total(dom, zero) - _total(rng, zero)
    try:
        s = diff.sign()
    except Undecided:
        s = 0
    if s != 0:
        raise LengthMismatch(f"domain and range gaps differ by {float(diff):.3g}")
    new = [p for p in part.pieces if p.shift is not None]
    di = ri = 0
    d_pos = dom[0][0] if dom else None
    r_pos = rng[0][0] if rng else None
    while di < len(dom) and ri < len(rng):
        d_end = dom[di][1]
        r_end = rng[ri][1]
        d_left = d_end - d_pos
        r_left = r_end - r_pos
        c = (d_left - r_left).sign()
        take = d_left if c <= 0 else r_left
        new.append(Piece(d_pos, d_pos + take, r_pos - d_pos, "ghost"))
        d_pos = d_pos + take
        r_pos = r_pos + take
        if c <= 0:
            di += 1
            d_pos = dom[di][0] if di < len(dom) else None
        if c >= 0:
            ri += 1
            r_pos = rng[ri][0] if ri < len(rng) else None
    new.sort(key=lambda p: float(p.lo))
    ghost = IET(new)
    part.ghost = ghost
    return ghost


def ghost_components(part: ReturnMapPartition, max_iter: int = 200) -> list:
    ghost = part.ghost or ghost_complete(part)
    return iet_classify(ghost, max_iter)

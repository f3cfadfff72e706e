"""Beams: maximal intervals of parallel rays that share a level code.

An interval of transverse coordinates is pushed through the unfolding as a
whole.  In each copy the junction vertex either lies outside the interval,
and everything leaves through one edge, or strictly inside, and the interval
splits into two sub-beams separated by a singular ray through that vertex.

Intervals are exact :class:`~rhombus_billiards.exact.Real` pairs in the
global transverse coordinate, which is constant along each ray.  For the
perpendicular direction and the base copy this is the x coordinate on L.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Optional

from .angle import PERPENDICULAR, AngleSpec, parse_angle
from .coding import (ESCAPES_DOWN, ESCAPES_UP, RETURNING_DOWN, RETURNING_UP, Code,
                     classify_code, is_palindrome)
from .errors import CountViolation, StepBudgetExhausted, Undecided
from .exact import Pt, Real
from .geometry import (BAND_EDGE, BUDGET, RETURNED, VERTICES, StopRule, TriangleConfig, VertexHit,
                       apply_linear, center_step, coerce_x, heading)

S0_PLUS = "S0+"
S0_MINUS = "S0-"
SN = "SN"
SM = "SM"


@dataclass(frozen=True)
class Bound:
    """What sits at one end of a beam: a singular ray through a vertex, or the end of the start set."""

    kind: str  # "vertex" or "start"
    label: str = ""
    step: int = -1
    level: int = 0
    point: Optional[Pt] = None

    @property
    def key(self) -> tuple:
        return (self.kind, self.label, self.step, self.level)

    def to_json(self) -> dict:
        d = {"kind": self.kind, "label": self.label}
        if self.kind == "vertex":
            d.update(step=self.step, level=self.level)
        return d


@dataclass(frozen=True)
class Beam:
    """One beam.  ``lo``/``hi`` is the initial interval I in global transverse coordinates."""

    cfg: TriangleConfig
    direction: AngleSpec
    lo: Real
    hi: Real
    code: Code
    centers: tuple
    terminal: str
    left: Bound
    right: Bound
    start_set: str = ""
    center_passages: tuple = ()
    degenerate: bool = False

    @property
    def p(self) -> int:
        return self.code.p

    @property
    def start_level(self) -> int:
        return self.code[0]

    @property
    def end_level(self) -> int:
        return self.code[-1]

    @property
    def width(self) -> Real:
        return self.hi - self.lo

    @property
    def midpoint(self) -> Real:
        return (self.lo + self.hi) / 2

    def _t(self, pt: Pt) -> Real:
        return heading(self.cfg, self.direction).t(pt)

    @property
    def I(self) -> tuple:
        """Initial interval relative to the start copy center."""
        tc = self._t(self.centers[0])
        return (self.lo - tc, self.hi - tc)

    @property
    def J(self) -> tuple:
        """Final interval relative to the center of the copy where the beam stops."""
        tc = self._t(self.centers[-1])
        return (self.lo - tc, self.hi - tc)

    @property
    def palindromic(self) -> bool:
        return is_palindrome(self.code)

    def classify(self, band: tuple) -> str:
        return classify_code(self.code, band)

    def exceptional(self, band: tuple) -> Optional[str]:
        c = self.classify(band)
        return c if c in (ESCAPES_UP, ESCAPES_DOWN) else None

    def flags(self, band: tuple) -> dict:
        cls = self.classify(band)
        return {
            "class": cls,
            "palindromic": self.palindromic,
            "contains_center": [list(c) for c in self.center_passages],
            "exceptional_up": cls == ESCAPES_UP,
            "exceptional_down": cls == ESCAPES_DOWN,
            "degenerate": self.degenerate,
        }

    def __repr__(self):
        return f"Beam({self.start_set} [{float(self.lo):.6g}, {float(self.hi):.6g}] code={self.code})"


@dataclass(frozen=True)
class Split:
    t: Real
    vertex: VertexHit
    start_set: str


@dataclass
class BeamSet:
    cfg: TriangleConfig
    band: tuple
    beams: list
    splits: list = dc_field(default_factory=list)
    degenerate: list = dc_field(default_factory=list)
    direction: AngleSpec = PERPENDICULAR
    start_sets: dict = dc_field(default_factory=dict)

    def signature(self) -> tuple:
        """Exact, hashable summary used to compare beam sets."""
        def real(x):
            return tuple(sorted(x.terms.items()))
        return (self.cfg.alpha_spec, self.band, self.direction,
                tuple((b.start_set, tuple(b.code), b.terminal, real(b.lo), real(b.hi), b.left.key, b.right.key,
                       b.center_passages) for b in self.beams),
                tuple((real(s.t), s.vertex.label, s.vertex.step, s.start_set) for s in self.splits))

    @property
    def center_hits(self) -> dict:
        """Map from beam index to the center passages strictly inside that beam."""
        return {i: b.center_passages for i, b in enumerate(self.beams) if b.center_passages}

    def side(self, *labels) -> list:
        return [b for b in self.beams if b.start_set in labels]

    def count_from(self, *labels) -> int:
        return len(self.side(*labels))

    def start_width(self, *labels) -> Real:
        total = self.cfg.field.zero()
        for lab in labels:
            if lab in self.start_sets:
                lo, hi = self.start_sets[lab]
                total = total + (hi - lo)
        return total


def centers_from_code(cfg: TriangleConfig, code, direction=PERPENDICULAR, start_center: Pt | None = None) -> tuple:
    """Rebuild the copy centers along a code.

    The two forward edges of a copy always change the level in opposite
    directions, so the code alone fixes the path.
    """
    h = heading(cfg, direction)
    period = cfg.root_period
    center = start_center if start_center is not None else Pt()
    out = [center]
    for a, b in zip(code, code[1:]):
        shape = h.shape(a)
        edge = next(e for e in shape.upper if e.delta == b - a)
        center = (center + center_step(edge.normal)).reduce(period)
        out.append(center)
    return tuple(out)


def start_interval(cfg: TriangleConfig, level: int, delta: int, direction=PERPENDICULAR):
    """Transverse range of the copy at ``level`` (center 0) whose rays leave toward ``level + delta``."""
    h = heading(cfg, direction)
    shape = h.shape(level)
    for e in shape.upper:
        if e.delta == delta:
            a = shape.vertex_t[e.start]
            b = shape.vertex_t[e.end]
            return (a, b) if a < b else (b, a)
    return None


class _Item:
    __slots__ = ("lo", "hi", "level", "center", "tc", "levels", "centers", "left", "right", "passages")

    def __init__(self, lo, hi, level, center, tc, levels, centers, left, right, passages):
        self.lo, self.hi = lo, hi
        self.level, self.center, self.tc = level, center, tc
        self.levels, self.centers = levels, centers
        self.left, self.right = left, right
        self.passages = passages


def propagate_beam(cfg: TriangleConfig, interval, stop: StopRule | None = None, *,
                   direction=PERPENDICULAR, start_level: int = 0, start_center: Pt | None = None,
                   start_set: str = "", strict: bool = False, splits_out: list | None = None,
                   _boundary_centers=None) -> list:
    """Split the rays of ``interval`` into beams, ordered left to right.

    Each beam runs until its rays enter a stopping level of ``stop`` or the
    step budget runs out; in the latter case the beam is returned with a
    ``budget`` terminal unless ``strict`` is set.  Split points are appended
    to ``splits_out`` when it is given.
    """
    stop = stop or StopRule.first_return()
    direction = parse_angle(direction) if isinstance(direction, str) else direction
    h = heading(cfg, direction)
    period = cfg.root_period
    modulus = stop.effective_modulus(cfg, direction)
    lo, hi = (coerce_x(cfg, v, h.field) for v in interval)
    if not lo < hi:
        raise ValueError("interval must have lo < hi")
    center = start_center if start_center is not None else Pt()
    stack = [_Item(lo, hi, start_level, center, h.t(center), [start_level], [center],
                   Bound("start", "lo"), Bound("start", "hi"), [])]
    out = []
    while stack:
        it = stack.pop()
        step = len(it.levels) - 1
        while True:
            shape = h.shape(it.level)
            if step > 0:
                s_lo = (it.tc - it.lo).sign()
                s_hi = (it.tc - it.hi).sign()
                if s_lo > 0 and s_hi < 0:
                    it.passages.append((step, it.level))
                elif (s_lo == 0 or s_hi == 0) and _boundary_centers is not None:
                    _boundary_centers.append((it.tc, step, it.level))
            if shape.junction is None:
                goes = [(shape.upper[0], it.lo, it.hi, it.left, it.right)]
            else:
                tj = it.tc + shape.junction_t
                a = (tj - it.lo).sign()
                b = (tj - it.hi).sign()
                if a <= 0:
                    goes = [(shape.upper[1], it.lo, it.hi, it.left, it.right)]
                elif b >= 0:
                    goes = [(shape.upper[0], it.lo, it.hi, it.left, it.right)]
                else:
                    v = shape.junction
                    point = it.center + apply_linear(it.level, VERTICES[v])
                    hit = VertexHit(v, it.level, step, point)
                    bound = Bound("vertex", hit.label, step, it.level, point)
                    goes = [(shape.upper[0], it.lo, tj, it.left, bound),
                            (shape.upper[1], tj, it.hi, bound, it.right)]
                    out.append(Split(tj, hit, start_set))
            children = []
            for edge, lo_, hi_, left, right in goes:
                cs = center_step(edge.normal).reduce(period)
                children.append(_Item(lo_, hi_, it.level + edge.delta, (it.center + cs).reduce(period),
                                      it.tc + h.t(cs), it.levels + [it.level + edge.delta],
                                      it.centers + [(it.center + cs).reduce(period)],
                                      left, right, list(it.passages)))
            step += 1
            done = []
            for ch in children:
                wrapped = bool(modulus) and (ch.level - start_level) % modulus == 0
                if ch.level in stop.levels or wrapped:
                    kind = RETURNED if ch.level == start_level or wrapped else BAND_EDGE
                    done.append((ch, kind))
                elif step >= stop.max_steps:
                    if strict:
                        raise StepBudgetExhausted(f"beam still open after {step} crossings")
                    done.append((ch, BUDGET))
                else:
                    done.append((ch, None))
            if len(done) == 2:
                # push right first so the left half is finished first
                for ch, kind in reversed(done):
                    if kind is None:
                        stack.append(ch)
                    else:
                        out.append(_finish(cfg, direction, ch, kind, start_set))
                break
            ch, kind = done[0]
            if kind is not None:
                out.append(_finish(cfg, direction, ch, kind, start_set))
                break
            it = ch
    beams = [b for b in out if isinstance(b, Beam)]
    splits = [s for s in out if isinstance(s, Split)]
    beams.sort(key=lambda b: float(b.lo))
    _check_order(beams)
    if splits_out is not None:
        splits_out.extend(splits)
    return beams


def _finish(cfg, direction, it: _Item, kind: str, start_set: str) -> Beam:
    return Beam(cfg, direction, it.lo, it.hi, Code(it.levels), tuple(it.centers), kind,
                it.left, it.right, start_set, tuple(it.passages))


def _check_order(beams):
    for a, b in zip(beams, beams[1:]):
        if a.hi > b.lo:
            raise Undecided("beam order could not be certified", a.hi - b.lo)


def _side(cfg, band_stop, level, delta, label, direction, strict, boundary, splits):
    iv = start_interval(cfg, level, delta, direction)
    if iv is None:
        return [], None
    beams = propagate_beam(cfg, iv, band_stop, direction=direction, start_level=level,
                           start_set=label, strict=strict, splits_out=splits, _boundary_centers=boundary)
    return beams, iv


def decompose_band(cfg: TriangleConfig, M: int, N: int, *, direction=PERPENDICULAR,
                   max_steps: int = 200_000) -> BeamSet:
    """Enumerate the beams of the start sets for the band ``M .. N``.

    For ``N > 0`` the positive start set is S0+ (rays of level 0 leaving
    toward level 1) together with SN (rays of the level-N copy leaving toward
    N-1); each beam runs until it enters level 0 or N.  For ``M < 0`` the
    negative start set S0-, SM is handled the same way.  ``M = 0`` or
    ``N = 0`` skips that side.
    """
    if M > 0 or N < 0 or (M == 0 and N == 0):
        raise ValueError("band must satisfy M <= 0 <= N with M < N")
    direction = parse_angle(direction) if isinstance(direction, str) else direction
    beams, splits, boundary = [], [], []
    start_sets = {}
    if N > 0:
        stop = StopRule(frozenset({0, N}), 0, max_steps)
        for level, delta, label in ((0, 1, S0_PLUS), (N, -1, SN)):
            bs, iv = _side(cfg, stop, level, delta, label, direction, True, boundary, splits)
            beams += bs
            if iv:
                start_sets[label] = iv
    if M < 0:
        stop = StopRule(frozenset({0, M}), 0, max_steps)
        for level, delta, label in ((0, -1, S0_MINUS), (M, 1, SM)):
            bs, iv = _side(cfg, stop, level, delta, label, direction, True, boundary, splits)
            beams += bs
            if iv:
                start_sets[label] = iv
    degenerate = []
    for sp in splits:
        for t, step, level in boundary:
            if step < sp.vertex.step and (t - sp.t).sign() == 0:
                degenerate.append(Beam(cfg, direction, sp.t, sp.t, Code([sp.vertex.level]), (), "degenerate",
                                       Bound("vertex", sp.vertex.label, sp.vertex.step, sp.vertex.level),
                                       Bound("center", f"C@{level}", step, level), sp.start_set,
                                       ((step, level),), True))
    return BeamSet(cfg, (M, N), beams, splits, degenerate, direction, start_sets)


class Exceptional:
    """The unique up and down exceptional beams of one side of a band."""

    def __init__(self, up: Beam, down: Beam, others: list):
        self.up = up
        self.down = down
        self.others = others

    def __iter__(self):
        return iter((self.up, self.down))

    @property
    def others_ok(self) -> bool:
        return all(ok for _, ok in self.others)


def find_exceptional(bs: BeamSet, side: str = "positive") -> Exceptional:
    """Return the unique beams crossing the band on one side.

    On the positive side ``up`` has code ``0 ... N`` and ``down`` has code
    ``N ... 0``; on the negative side they are ``0 ... M`` and ``M ... 0``.
    Every other beam of that side is checked to be returning with a
    palindromic code; the outcome is in ``others``.
    """
    M, N = bs.band
    if side == "positive":
        labels, edge = (S0_PLUS, SN), N
    else:
        labels, edge = (S0_MINUS, SM), M
    if edge == 0:
        raise ValueError(f"band {bs.band} has no {side} side")
    beams = bs.side(*labels)
    up = [b for b in beams if b.code[0] == 0 and b.code[-1] == edge]
    down = [b for b in beams if b.code[0] == edge and b.code[-1] == 0]
    if len(up) != 1 or len(down) != 1:
        raise CountViolation(f"expected one beam each way across the band, found {len(up)} and {len(down)}")
    others = []
    for b in beams:
        if b is up[0] or b is down[0]:
            continue
        cls = classify_code(b.code, bs.band)
        others.append((b, cls in (RETURNING_UP, RETURNING_DOWN) and b.palindromic))
    return Exceptional(up[0], down[0], others)


def _abs_upper(x: Real, prec: int) -> float:
    """Certified upper bound on ``|x|`` rounded up to a float."""
    import gmpy2
    b = x.field.abs_bound(x, prec)
    return float(gmpy2.next_above(b)) if b else 0.0


@dataclass(frozen=True)
class Residual:
    value: float  # certified upper bound
    exact_zero: bool
    precision: int

    @property
    def certified(self) -> bool:
        """True when the bound lies below 2**(-precision/2)."""
        return self.value < 2.0 ** (-self.precision / 2)


def center_hit_report(beam: Beam, precision: int | None = None) -> Residual:
    """Transverse distance between the beam's midpoint ray and the center of copy ``p // 2``.

    The distance is zero exactly when the midpoint ray passes through that
    center.  The returned bound comes from interval evaluation at
    ``precision`` bits (default: the config's working precision).
    """
    prec = precision or beam.cfg.precision_bits
    k = beam.p // 2
    tc = beam._t(beam.centers[k])
    r = beam.midpoint - tc
    return Residual(_abs_upper(r, prec), r.is_exactly_zero(), prec)


def symmetry_residual(beam: Beam, precision: int | None = None) -> Residual:
    """Distance between J and the central reflection of I, both relative to their copy centers."""
    prec = precision or beam.cfg.precision_bits
    (a, b), (c, d) = beam.I, beam.J
    r1 = c + b
    r2 = d + a
    v = max(_abs_upper(r1, prec), _abs_upper(r2, prec))
    return Residual(v, r1.is_exactly_zero() and r2.is_exactly_zero(), prec)


def half_period_symmetry(beam: Beam, precision: int | None = None) -> bool:
    """True iff J is the central reflection of I, certified at ``precision`` bits.

    Beams that stop on a different level than they started can never pass.
    """
    if beam.start_level != beam.end_level:
        return False
    return symmetry_residual(beam, precision).certified

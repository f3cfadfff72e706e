"""Rhombus geometry and the unfolding of straight rays through labelled copies.

The rhombus has unit sides and vertices ``E = (cos a, 0)``, ``N = (0, sin a)``,
``W = (-cos a, 0)``, ``S = (0, -sin a)``.  Every point that shows up is stored
as a :class:`~rhombus_billiards.exact.Pt`, i.e. half-integer combinations of
powers of ``z = exp(i*a)``, so positions stay exact.

A copy at level ``k`` maps base vectors by ``w -> z**(2k) * w`` for even ``k``
and ``w -> z**(2k) * conj(w)`` for odd ``k``.  Crossing an edge reflects the
copy across it.  The level goes up by one when the crossed edge is one of
NW/SE in an even copy, or one of NE/SW in an odd copy, and down by one
otherwise.  With this choice a perpendicular ray from the left half of the
long diagonal L is coded ``0 1 ...``.

Rays are described by their direction ``theta`` and their transverse
coordinate ``t``, which is constant along a ray.  Deciding which edge a ray
leaves a copy through only needs the sign of ``t - t(junction vertex)``, where
the junction vertex is where the two forward-facing edges meet.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from functools import lru_cache
from typing import Optional

from .angle import PERPENDICULAR, AngleSpec, angle, parse_angle
from .coding import Code
from .errors import OutOfRange, StepBudgetExhausted, UndecidableRange, Undecided
from .exact import Field, Pt, Real, _accumulate, angle_sign

VERTICES = {
    "E": Pt({1: 1, -1: 1}),
    "N": Pt({1: 1, -1: -1}),
    "W": Pt({1: -1, -1: -1}),
    "S": Pt({1: -1, -1: 1}),
}
ACUTE = ("E", "W")
OBTUSE = ("N", "S")

# name, endpoints, pair, outward normal as (eps, m) meaning eps * i * z**m
EDGES = (
    ("NE", "E", "N", "B", (1, -1)),
    ("NW", "N", "W", "A", (1, 1)),
    ("SW", "W", "S", "B", (-1, -1)),
    ("SE", "S", "E", "A", (-1, 1)),
)

RETURNED = "returned"
BAND_EDGE = "band_edge"
VERTEX = "vertex"
UNDECIDED = "undecided"
BUDGET = "budget"

LOWER_THEOREM = angle(Fraction(1, 6))
UPPER_THEOREM = angle(Fraction(1, 4))


@lru_cache(maxsize=256)
def field_for(alpha: AngleSpec, theta: Optional[AngleSpec], precision: int, max_precision: int) -> Field:
    return Field(alpha, theta, precision, max_precision)


@dataclass(frozen=True)
class TriangleConfig:
    """The right triangle with smaller angle ``alpha`` and its rhombus."""

    alpha_spec: AngleSpec
    precision_bits: int = 128
    max_precision_bits: int = 1024
    in_theorem_range: bool = False

    @property
    def field(self) -> Field:
        return field_for(self.alpha_spec, None, self.precision_bits, self.max_precision_bits)

    @property
    def alpha(self) -> float:
        return float(self.alpha_spec)

    @property
    def cos_alpha(self) -> Real:
        return self.field.cos(1)

    @property
    def sin_alpha(self) -> Real:
        return self.field.sin(1)

    @property
    def diagonal_length(self) -> Real:
        """Length of L, i.e. ``2 cos(alpha)``."""
        return self.field.cos(1, coeff=2)

    @property
    def root_period(self) -> int:
        """Smallest J > 0 with ``exp(i*J*alpha) == 1``, or 0 if alpha is not a rational multiple of pi."""
        a = self.alpha_spec
        if a.const:
            return 0
        p, q = a.pi_coeff.numerator, a.pi_coeff.denominator
        return 2 * q // math.gcd(2 * q, p)

    @property
    def level_period(self) -> int:
        """Smallest k > 0 with ``2*k*alpha`` a multiple of pi, or 0 if there is none."""
        a = self.alpha_spec
        if a.const:
            return 0
        q = a.pi_coeff.denominator
        return q // math.gcd(q, 2)

    def with_precision(self, precision_bits: int, max_precision_bits: int | None = None) -> "TriangleConfig":
        return make_triangle(self.alpha_spec, precision_bits,
                             max(max_precision_bits or self.max_precision_bits, precision_bits))

    def vertices(self) -> dict:
        return dict(VERTICES)


def make_triangle(alpha_spec, precision_bits: int = 128, max_precision_bits: int = 1024) -> TriangleConfig:
    """Build a :class:`TriangleConfig` after checking ``0 < alpha < pi/4``.

    >>> make_triangle("pi/5").in_theorem_range
    True
    """
    spec = parse_angle(alpha_spec) if isinstance(alpha_spec, str) else alpha_spec
    if max_precision_bits < precision_bits:
        max_precision_bits = precision_bits
    try:
        lo = angle_sign(spec, precision_bits, max_precision_bits)
        hi = angle_sign(spec - UPPER_THEOREM, precision_bits, max_precision_bits)
    except Undecided as exc:
        raise UndecidableRange(f"cannot place {spec} relative to 0 and pi/4") from exc
    if lo <= 0 or hi >= 0:
        raise OutOfRange(f"alpha = {spec} must lie strictly between 0 and pi/4")
    try:
        low = angle_sign(spec - LOWER_THEOREM, precision_bits, max_precision_bits)
    except Undecided as exc:
        raise UndecidableRange(f"cannot place {spec} relative to pi/6") from exc
    return TriangleConfig(spec, precision_bits, max_precision_bits, low > 0)


def coerce_x(cfg: TriangleConfig, x, field: Field | None = None) -> Real:
    """Turn a float, Fraction, int, decimal string or Real into a Real."""
    field = field or cfg.field
    if isinstance(x, Real):
        return x
    if isinstance(x, str):
        return field.const(Fraction(x))
    if isinstance(x, float):
        return field.const(Fraction(x))
    return field.const(Fraction(x))


def apply_linear(level: int, p: Pt) -> Pt:
    return p.conj().shift(2 * level) if level % 2 else p.shift(2 * level)


def world_normal(level: int, normal: tuple) -> tuple:
    eps, m = normal
    if level % 2:
        return (-eps, 2 * level - m)
    return (eps, 2 * level + m)


def center_step(normal: tuple) -> Pt:
    """Displacement of the copy center when crossing an edge with this world normal."""
    eps, m = normal
    return Pt({m + 2: eps, m - 2: -eps})


def level_delta(level: int, pair: str) -> int:
    return 1 if (pair == "A") != (level % 2 == 1) else -1


@dataclass(frozen=True)
class UpperEdge:
    name: str
    delta: int
    normal: tuple
    start: str
    end: str


@dataclass(frozen=True)
class Shape:
    """Forward-facing edges of a copy at one level, ordered by transverse position."""

    level: int
    upper: tuple
    junction: Optional[str]
    junction_t: Optional[Real]
    vertex_t: dict


class Heading:
    """A direction ``theta`` together with the transverse coordinate it induces."""

    def __init__(self, cfg: TriangleConfig, theta=PERPENDICULAR):
        theta = parse_angle(theta) if isinstance(theta, str) else theta
        self.cfg = cfg
        self.theta = theta
        self.quarter = theta.quarter_turns()
        if self.quarter is None:
            self.field = field_for(cfg.alpha_spec, theta, cfg.precision_bits, cfg.max_precision_bits)
        else:
            self.field = cfg.field
        self._shapes = {}

    def _shifted(self, j: int, kind: str, coeff: Fraction, out: dict):
        """Add ``coeff * sin(j*a - theta)`` (kind 's') or ``coeff * cos(j*a - theta)`` to ``out``."""
        q = self.quarter
        if q is None:
            if kind == "s":
                _accumulate(out, j, 1, Fraction(0), coeff)
            else:
                _accumulate(out, j, 1, coeff, Fraction(0))
            return
        if kind == "s":
            c, s = ((0, 1), (-1, 0), (0, -1), (1, 0))[q]
        else:
            c, s = ((1, 0), (0, 1), (-1, 0), (0, -1))[q]
        _accumulate(out, j, 0, coeff * c, coeff * s)

    def t(self, p: Pt) -> Real:
        """Transverse coordinate; for the perpendicular direction this is the x coordinate."""
        out = {}
        for j, a in p.coeffs.items():
            self._shifted(j, "s", Fraction(-a, 2), out)
        return Real(self.field, out)

    def longitudinal(self, p: Pt) -> Real:
        out = {}
        for j, a in p.coeffs.items():
            self._shifted(j, "c", Fraction(a, 2), out)
        return Real(self.field, out)

    def normal_long(self, normal: tuple) -> Real:
        eps, m = normal
        out = {}
        self._shifted(m, "s", Fraction(-eps), out)
        return Real(self.field, out)

    def normal_trans(self, normal: tuple) -> Real:
        eps, m = normal
        out = {}
        self._shifted(m, "c", Fraction(-eps), out)
        return Real(self.field, out)

    def shape(self, level: int) -> Shape:
        hit = self._shapes.get(level)
        if hit is not None:
            return hit
        upper = []
        for name, a, b, pair, normal in EDGES:
            wn = world_normal(level, normal)
            if self.normal_long(wn).sign() > 0:
                upper.append((self.normal_trans(wn), UpperEdge(name, level_delta(level, pair), wn, a, b)))
        if len(upper) == 2 and upper[0][0] > upper[1][0]:
            upper.reverse()
        edges = tuple(e for _, e in upper)
        vertex_t = {v: self.t(apply_linear(level, p)) for v, p in VERTICES.items()}
        junction = None
        if len(edges) == 2:
            common = {edges[0].start, edges[0].end} & {edges[1].start, edges[1].end}
            junction = common.pop()
        shape = Shape(level, edges, junction, vertex_t[junction] if junction else None, vertex_t)
        self._shapes[level] = shape
        return shape


@lru_cache(maxsize=64)
def _heading(cfg: TriangleConfig, theta: AngleSpec) -> Heading:
    return Heading(cfg, theta)


def heading(cfg: TriangleConfig, theta=PERPENDICULAR) -> Heading:
    theta = parse_angle(theta) if isinstance(theta, str) else theta
    return _heading(cfg, theta)


@dataclass(frozen=True)
class StopRule:
    """When a trace ends.

    ``levels`` are stopping levels, checked after every crossing.  When
    ``modulus`` is positive, any level congruent to the start level modulo it
    also stops the trace.  ``perpendicular`` asks for the modulus to be taken
    from the triangle for perpendicular traces: for rational alpha a copy at
    a level k with ``2*k*alpha`` in ``pi*Z`` has its long diagonal horizontal,
    the ray crosses it at a right angle and the folded orbit retraces itself.
    ``max_steps`` bounds the number of crossings.
    """

    levels: frozenset = frozenset({0})
    modulus: int = 0
    max_steps: int = 100_000
    perpendicular: bool = False

    @classmethod
    def first_return(cls, max_steps: int = 100_000) -> "StopRule":
        return cls(frozenset({0}), 0, max_steps, True)

    @classmethod
    def band_edge(cls, M: int, N: int, max_steps: int = 100_000) -> "StopRule":
        return cls(frozenset({M, 0, N}), 0, max_steps)

    @classmethod
    def step_budget(cls, n: int) -> "StopRule":
        return cls(frozenset(), 0, n)

    @classmethod
    def level_zero(cls, max_steps: int = 100_000) -> "StopRule":
        """Stop only on the literal level 0, even for rational alpha."""
        return cls(frozenset({0}), 0, max_steps)

    def effective_modulus(self, cfg: "TriangleConfig", direction: AngleSpec) -> int:
        if self.modulus:
            return self.modulus
        if self.perpendicular and direction.quarter_turns() in (1, 3):
            return cfg.level_period
        return 0


@dataclass(frozen=True)
class VertexHit:
    name: str
    level: int
    step: int
    point: Pt

    @property
    def acute(self) -> bool:
        return self.name in ACUTE

    @property
    def label(self) -> str:
        return f"{self.name}@{self.level}"


@dataclass(frozen=True)
class Event:
    kind: str  # "cross" or "center"
    step: int
    level: int
    center: Pt
    edge: str = ""
    to_level: int = 0


@dataclass(frozen=True)
class Terminal:
    kind: str
    level: int
    step: int
    offset: Optional[Real] = None
    vertex: Optional[VertexHit] = None
    message: str = ""


@dataclass
class Trajectory:
    cfg: TriangleConfig
    start_x: Real
    direction: AngleSpec
    levels: list
    centers: list
    events: list
    terminal: Terminal
    exit_edges: list = dc_field(default_factory=list)

    @property
    def code(self) -> Code:
        return Code(self.levels)

    @property
    def periodic(self) -> bool:
        """True when the trace ended by crossing a horizontal long diagonal at a right angle."""
        return self.terminal.kind == RETURNED and self.direction.quarter_turns() in (1, 3)

    def period_code(self) -> Code:
        """Level sequence of one full period for a perpendicular return.

        After the right-angle hit the folded orbit retraces its path, so
        the copies of the period are the traced ones followed by the same
        copies in reverse order.
        """
        if not self.periodic:
            raise ValueError("trajectory did not end with a perpendicular return")
        lv = list(self.levels)
        return Code(lv + lv[-2::-1])

    @property
    def return_offset(self) -> Optional[Real]:
        return self.terminal.offset

    @property
    def center_passages(self) -> list:
        return [e for e in self.events if e.kind == "center"]

    def polyline(self) -> list:
        """Float segment endpoints of the unfolded ray, one pair per copy."""
        a = self.cfg.alpha
        th = float(self.direction)
        d = complex(math.cos(th), math.sin(th))
        t0 = float(self.start_x)
        pts = []
        for level, center in zip(self.levels, self.centers):
            cz = center.to_complex(a)
            verts = [cz + apply_linear(level, VERTICES[v]).to_complex(a) for v in "ENWS"]
            lo, hi = _chord(verts, t0, d)
            pts.append((lo, hi))
        return pts


def _chord(verts, t0: float, d: complex):
    """Longitudinal extent of the transverse line ``t = t0`` inside a convex quad (floats)."""
    perp = d * 1j
    base = -perp * t0  # point with transverse t0 and longitudinal 0
    vals = []
    n = len(verts)
    for i in range(n):
        p, q = verts[i], verts[(i + 1) % n]
        tp = -((p * d.conjugate()).imag)
        tq = -((q * d.conjugate()).imag)
        if (tp - t0) * (tq - t0) <= 0 and tp != tq:
            s = (t0 - tp) / (tq - tp)
            pt = p + s * (q - p)
            vals.append((pt * d.conjugate()).real)
    if not vals:
        return base, base
    return base + d * min(vals), base + d * max(vals)


def trace_ray(cfg: TriangleConfig, start_x, direction=PERPENDICULAR, stop: StopRule | None = None, *,
              start_level: int = 0, start_center: Pt | None = None, side: int = 0,
              strict: bool = False) -> Trajectory:
    """Unfold the ray with transverse coordinate ``start_x`` starting in the given copy.

    ``start_x`` is measured in the plane of the unfolding, so for the
    perpendicular direction and the base copy it is the x coordinate on L.
    ``side`` of +1 or -1 traces the limit of rays just right or left of
    ``start_x``; it only matters in the start copy and is how orbits leaving
    a vertex of L are followed.  Ties anywhere else are vertex hits.

    Budget exhaustion and uncertified decisions end the trace with a
    ``budget`` or ``undecided`` terminal; with ``strict`` they raise instead.

    >>> cfg = make_triangle("0.7")
    >>> str(trace_ray(cfg, cfg.cos_alpha * -1, side=1).code)
    '0 1 0'
    """
    stop = stop or StopRule.first_return()
    direction = parse_angle(direction) if isinstance(direction, str) else direction
    h = heading(cfg, direction)
    t0 = coerce_x(cfg, start_x, h.field)
    level = start_level
    center = start_center if start_center is not None else Pt()
    tc = h.t(center)
    period = cfg.root_period
    modulus = stop.effective_modulus(cfg, direction)
    levels = [level]
    centers = [center]
    events = []
    edges = []
    step = 0
    terminal = None
    try:
        while terminal is None:
            shape = h.shape(level)
            rel = t0 - tc
            if step > 0 and rel.sign() == 0:
                events.append(Event("center", step, level, center))
            if shape.junction is None:
                edge = shape.upper[0]
            else:
                s = (rel - shape.junction_t).sign()
                if s == 0 and step == 0:
                    s = side
                if s == 0:
                    v = shape.junction
                    point = center + apply_linear(level, VERTICES[v])
                    terminal = Terminal(VERTEX, level, step, None, VertexHit(v, level, step, point))
                    break
                edge = shape.upper[0] if s < 0 else shape.upper[1]
            events.append(Event("cross", step, level, center, edge.name, level + edge.delta))
            edges.append(edge.name)
            center = (center + center_step(edge.normal)).reduce(period)
            tc = tc + h.t(center_step(edge.normal).reduce(period))
            level += edge.delta
            step += 1
            levels.append(level)
            centers.append(center)
            wrapped = bool(modulus) and (level - start_level) % modulus == 0
            if level in stop.levels or wrapped:
                kind = RETURNED if level == start_level or wrapped else BAND_EDGE
                terminal = Terminal(kind, level, step, t0 - tc)
            elif step >= stop.max_steps:
                if strict:
                    raise StepBudgetExhausted(f"no stop after {step} crossings")
                terminal = Terminal(BUDGET, level, step, None, message=f"{step} crossings")
    except Undecided as exc:
        if strict:
            raise
        terminal = Terminal(UNDECIDED, level, step, None, message=str(exc))
    return Trajectory(cfg, t0, direction, levels, centers, events, terminal, edges)

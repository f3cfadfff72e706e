"""Two point masses on a segment as a billiard in a right triangle.

With positions rescaled by the square roots of the masses, the elastic
two-particle system on ``[0, 1]`` becomes a billiard in the triangle
``0 <= q1/sqrt(m1) <= q2/sqrt(m2) <= 1``.  Its right angle sits at
``(0, sqrt(m2))`` and its smaller angle is ``atan(sqrt(min(m)/max(m)))``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from ..angle import AngleSpec, angle, parse_angle

LEFT_WALL = "L"
RIGHT_WALL = "R"
PARTICLES = "P"

HORIZONTAL = "horizontal"
VERTICAL = "vertical"
HYPOTENUSE = "hypotenuse"


@dataclass(frozen=True)
class GasMap:
    m1: float
    m2: float
    alpha: float
    alpha_spec: AngleSpec
    exact: bool

    @property
    def in_theorem_range(self) -> bool:
        """Strictly between pi/6 and pi/4; the mass ratio decides this exactly."""
        r = Fraction(min(self.m1, self.m2)) / Fraction(max(self.m1, self.m2))
        return Fraction(1, 3) < r < 1

    @property
    def boundary(self) -> bool:
        r = Fraction(min(self.m1, self.m2)) / Fraction(max(self.m1, self.m2))
        return r in (Fraction(1, 3), Fraction(1))

    @property
    def wall_labels(self) -> dict:
        """Which triangle side each collision type becomes after :func:`embed`."""
        if self.m1 <= self.m2:
            return {LEFT_WALL: HORIZONTAL, RIGHT_WALL: VERTICAL, PARTICLES: HYPOTENUSE}
        return {LEFT_WALL: VERTICAL, RIGHT_WALL: HORIZONTAL, PARTICLES: HYPOTENUSE}


def gas_map(m1: float, m2: float) -> GasMap:
    """Angle of the right triangle equivalent to masses ``m1`` (left) and ``m2`` (right).

    >>> gas_map(1, 3).alpha_spec.canonical
    'pi/6'
    """
    if not (m1 > 0 and m2 > 0):
        raise ValueError("masses must be positive")
    r = Fraction(min(m1, m2)) / Fraction(max(m1, m2))
    alpha = math.atan(math.sqrt(float(r)))
    if r == 1:
        return GasMap(m1, m2, math.pi / 4, angle(Fraction(1, 4)), True)
    if r == Fraction(1, 3):
        return GasMap(m1, m2, math.pi / 6, angle(Fraction(1, 6)), True)
    return GasMap(m1, m2, alpha, parse_angle(repr(alpha)), False)


def embed(g: GasMap, x1: float, x2: float, v1: float, v2: float):
    """Particle state to ``(point, velocity)`` in the normalized triangle.

    The normalized triangle has its right angle at the origin, the angle
    alpha at ``(cos a, 0)`` and the third vertex at ``(0, sin a)``.
    """
    s1, s2 = math.sqrt(g.m1), math.sqrt(g.m2)
    scale = 1.0 / math.sqrt(g.m1 + g.m2)
    q = (s1 * x1, s2 * x2 - s2)  # relative to the right-angle vertex
    w = (s1 * v1, s2 * v2)
    if g.m1 <= g.m2:
        rot = lambda u: (-u[1] * scale, u[0] * scale)
    else:
        rot = lambda u: (u[0] * scale, -u[1] * scale)
    return rot(q), rot(w)


def triangle_events(alpha: float, point, velocity, n_events: int) -> list:
    """Wall sequence of a float billiard in the normalized triangle."""
    ca, sa = math.cos(alpha), math.sin(alpha)
    x, y = point
    vx, vy = velocity
    out = []
    for _ in range(n_events):
        cands = []
        if vy < 0:
            cands.append((-y / vy, HORIZONTAL))
        if vx < 0:
            cands.append((-x / vx, VERTICAL))
        # hypotenuse: x/ca + y/sa = 1
        dn = vx / ca + vy / sa
        if dn > 0:
            cands.append(((1 - x / ca - y / sa) / dn, HYPOTENUSE))
        t, wall = min(cands)
        t = max(t, 0.0)
        x, y = x + t * vx, y + t * vy
        if wall == HORIZONTAL:
            vy = -vy
            y = 0.0
        elif wall == VERTICAL:
            vx = -vx
            x = 0.0
        else:
            nx, ny = sa, ca  # unit normal of the hypotenuse
            d = vx * nx + vy * ny
            vx, vy = vx - 2 * d * nx, vy - 2 * d * ny
        out.append(wall)
    return out


def collision_sequence(m1: float, m2: float, x1: float, x2: float, v1: float, v2: float, n_events: int) -> list:
    """Collision labels L, R, P predicted through the triangle billiard."""
    g = gas_map(m1, m2)
    p, v = embed(g, x1, x2, v1, v2)
    back = {side: label for label, side in g.wall_labels.items()}
    return [back[w] for w in triangle_events(g.alpha, p, v, n_events)]

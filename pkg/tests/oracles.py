"""Independent float simulators used as test oracles.

Neither simulator imports the package.  The triangle simulator folds the
orbit into the triangle ``(0,0), (cos a, 0), (0, sin a)`` and keeps the
element of the reflection group generated by the two legs (a sign pair)
to know which quarter of the rhombus it is in.  Level bookkeeping uses the
same sign convention as the package: edges NW and SE form one pair, edges
NE and SW the other, and a crossing of the first pair raises the level on
even levels.
"""

import math

# quarter (sx, sy) of the rhombus -> whether its outer edge belongs to the NW/SE pair
_PAIR_A = {(1, 1): False, (-1, 1): True, (-1, -1): False, (1, -1): True}


class NearVertex(Exception):
    pass


def naive_code(alpha, x0, *, max_bounces=4000, vertex_tol=1e-6, stop_at_zero=True):
    """Level code of the perpendicular ray from ``(x0, 0)`` computed in the folded triangle.

    Raises :class:`NearVertex` when the orbit passes within ``vertex_tol`` of
    a vertex of the triangle (including the right angle).  Returns ``None``
    when the level does not come back to 0 within ``max_bounces``.
    """
    ca, sa = math.cos(alpha), math.sin(alpha)
    sx = -1 if x0 < 0 else 1
    sy = 1
    x, y = abs(x0), 0.0
    vx, vy = 0.0, 1.0
    nx, ny = sa, ca  # unit normal of the hypotenuse x/ca + y/sa = 1
    level = 0
    levels = [0]
    corners = ((0.0, 0.0), (ca, 0.0), (0.0, sa))
    for _ in range(max_bounces):
        cands = []
        if vy < -1e-300:
            cands.append((-y / vy, "h"))
        if vx < -1e-300:
            cands.append((-x / vx, "v"))
        dn = vx / ca + vy / sa
        if dn > 1e-300:
            cands.append(((1 - x / ca - y / sa) / dn, "hyp"))
        t, wall = min(cands)
        x, y = x + t * vx, y + t * vy
        for cx, cy in corners:
            if math.hypot(x - cx, y - cy) < vertex_tol:
                raise NearVertex((x, y))
        if wall == "h":
            vy, y, sy = -vy, 0.0, -sy
        elif wall == "v":
            vx, x, sx = -vx, 0.0, -sx
        else:
            pair_a = _PAIR_A[(sx, sy)]
            level += 1 if pair_a != (level % 2 == 1) else -1
            levels.append(level)
            d = vx * nx + vy * ny
            vx, vy = vx - 2 * d * nx, vy - 2 * d * ny
            if stop_at_zero and level == 0:
                return levels
    return None


def two_particle_events(m1, m2, x1, x2, v1, v2, n_events):
    """Collision labels for two elastic point masses on ``[0, 1]``.

    ``L`` is the left particle hitting 0, ``R`` the right particle hitting
    1 and ``P`` a collision between the particles.
    """
    out = []
    for _ in range(n_events):
        cands = []
        if v1 < 0:
            cands.append((-x1 / v1, "L"))
        if v2 > 0:
            cands.append(((1 - x2) / v2, "R"))
        if v1 > v2:
            cands.append(((x2 - x1) / (v1 - v2), "P"))
        t, ev = min(cands)
        x1, x2 = x1 + t * v1, x2 + t * v2
        if ev == "L":
            v1, x1 = -v1, 0.0
        elif ev == "R":
            v2, x2 = -v2, 1.0
        else:
            x2 = x1
            u1 = ((m1 - m2) * v1 + 2 * m2 * v2) / (m1 + m2)
            u2 = ((m2 - m1) * v2 + 2 * m1 * v1) / (m1 + m2)
            v1, v2 = u1, u2
        out.append(ev)
    return out

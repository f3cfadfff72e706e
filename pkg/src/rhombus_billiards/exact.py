"""Exact reals over cos/sin of integer combinations of two angles, with certified signs.

A :class:`Real` is a finite rational combination of ``cos(j*alpha - k*theta)``
and ``sin(j*alpha - k*theta)``.  Every coordinate the unfolding produces has
this form, because all rhombus vertices are half-integer combinations of
powers of ``exp(i*alpha)``.

Signs are decided in three stages:

1. a double-precision sum with a rigorous forward error bound;
2. directed-rounding interval evaluation with gmpy2, doubling the precision
   up to the cap;
3. an exact zero test.  Both angles are affine in pi with rational
   coefficients, so after grouping terms by their non-pi part the
   Lindemann-Weierstrass theorem separates the groups, and each group is an
   element of a cyclotomic field, reduced modulo the cyclotomic polynomial.

Stage 3 only decides equality.  A value that is nonzero but below the
resolution of the precision cap raises :class:`Undecided`.
"""

from __future__ import annotations

import math
from collections import defaultdict
from decimal import ROUND_CEILING, ROUND_FLOOR, Context, Decimal
from fractions import Fraction
from functools import lru_cache

import gmpy2
from gmpy2 import mpfr, mpz

from .angle import AngleSpec
from .errors import Undecided

_ZERO = Fraction(0)
_FILTER_UNIT = 2.3e-16


def _lcm(a: int, b: int) -> int:
    return a * b // math.gcd(a, b)


@lru_cache(maxsize=None)
def cyclotomic(n: int) -> tuple:
    """Integer coefficients of the n-th cyclotomic polynomial, lowest degree first."""
    poly = [-1] + [0] * (n - 1) + [1]
    for d in range(1, n):
        if n % d == 0:
            poly = _exact_divide(poly, list(cyclotomic(d)))
    return tuple(poly)


def _exact_divide(num, den):
    num = list(num)
    out = [0] * (len(num) - len(den) + 1)
    lead = den[-1]
    for i in range(len(out) - 1, -1, -1):
        q = num[i + len(den) - 1] // lead
        out[i] = q
        if q:
            for j, c in enumerate(den):
                num[i + j] -= q * c
    assert not any(num[: len(den) - 1])
    return out


def _cyclotomic_is_zero(coeffs: dict, n: int) -> bool:
    phi = cyclotomic(n)
    deg = len(phi) - 1
    poly = [_ZERO] * n
    for e, c in coeffs.items():
        poly[e % n] += c
    for top in range(n - 1, deg - 1, -1):
        c = poly[top]
        if c:
            base = top - deg
            for i, pc in enumerate(phi):
                if pc:
                    poly[base + i] -= c * pc
    return not any(poly[:deg])


class _Rounding:
    __slots__ = ("down", "up")

    def __init__(self, prec: int):
        self.down = gmpy2.context(precision=prec, round=gmpy2.RoundDown)
        self.up = gmpy2.context(precision=prec, round=gmpy2.RoundUp)


@lru_cache(maxsize=64)
def _rounding(prec: int) -> _Rounding:
    return _Rounding(prec)


def _scale_down(r: _Rounding, q: Fraction, lo, hi):
    if q >= 0:
        return r.down.div(r.down.mul(lo, q.numerator), q.denominator)
    return r.down.div(r.down.mul(hi, q.numerator), q.denominator)


def _scale_up(r: _Rounding, q: Fraction, lo, hi):
    if q >= 0:
        return r.up.div(r.up.mul(hi, q.numerator), q.denominator)
    return r.up.div(r.up.mul(lo, q.numerator), q.denominator)


def rational_enclosure(q: Fraction, prec: int):
    r = _rounding(prec)
    return (r.down.div(mpz(q.numerator), mpz(q.denominator)),
            r.up.div(mpz(q.numerator), mpz(q.denominator)))


class Field:
    """Evaluation context for :class:`Real` numbers built on ``alpha`` and ``theta``.

    ``precision`` is where interval evaluation starts; it doubles up to
    ``max_precision`` before a sign is declared undecidable.
    """

    def __init__(self, alpha: AngleSpec, theta: AngleSpec | None = None,
                 precision: int = 128, max_precision: int = 1024):
        if precision < 16 or max_precision < precision:
            raise ValueError("need 16 <= precision <= max_precision")
        self.alpha = alpha
        self.theta = theta
        self.precision = precision
        self.max_precision = max_precision
        self._float_trig = {}
        self._enc_trig = {}

    def __repr__(self):
        th = f", theta={self.theta}" if self.theta is not None else ""
        return f"Field(alpha={self.alpha}{th}, precision={self.precision})"

    def compatible(self, other: "Field") -> bool:
        return self is other or (self.alpha == other.alpha and self.theta == other.theta)

    # constructors -------------------------------------------------------
    def const(self, q) -> "Real":
        q = Fraction(q)
        return Real(self, {(0, 0): (q, _ZERO)} if q else {})

    def cos(self, j: int, k: int = 0, coeff=1) -> "Real":
        t = {}
        _accumulate(t, j, k, Fraction(coeff), _ZERO)
        return Real(self, t)

    def sin(self, j: int, k: int = 0, coeff=1) -> "Real":
        t = {}
        _accumulate(t, j, k, _ZERO, Fraction(coeff))
        return Real(self, t)

    def zero(self) -> "Real":
        return Real(self, {})

    def coerce(self, value) -> "Real":
        if isinstance(value, Real):
            return value
        if isinstance(value, float):
            return self.const(Fraction(value))
        return self.const(Fraction(value))

    # trig values --------------------------------------------------------
    def angle_of(self, j: int, k: int) -> tuple:
        """Return (A, B) with j*alpha - k*theta = A*pi + B exactly."""
        a = self.alpha
        A = j * a.pi_coeff
        B = j * a.const
        if k:
            if self.theta is None:
                raise ValueError("this field has no direction angle")
            A -= k * self.theta.pi_coeff
            B -= k * self.theta.const
        return A, B

    def _angle_enclosure(self, j: int, k: int, prec: int):
        A, B = self.angle_of(j, k)
        r = _rounding(prec)
        pl, ph = r.down.const_pi(), r.up.const_pi()
        lo = _scale_down(r, A, pl, ph)
        hi = _scale_up(r, A, pl, ph)
        bl, bh = rational_enclosure(B, prec)
        return r.down.add(lo, bl), r.up.add(hi, bh)

    def trig_enclosure(self, j: int, k: int, prec: int):
        key = (prec, j, k)
        hit = self._enc_trig.get(key)
        if hit is not None:
            return hit
        r = _rounding(prec)
        lo, hi = self._angle_enclosure(j, k, prec)
        mid = r.down.add(lo, r.down.div(r.down.sub(hi, lo), 2))
        rad = max(r.up.sub(hi, mid), r.up.sub(mid, lo))
        one = mpfr(1)
        # cos and sin are 1-Lipschitz, so the midpoint value widened by the radius encloses the range.
        c = (max(-one, r.down.sub(r.down.cos(mid), rad)), min(one, r.up.add(r.up.cos(mid), rad)))
        s = (max(-one, r.down.sub(r.down.sin(mid), rad)), min(one, r.up.add(r.up.sin(mid), rad)))
        self._enc_trig[key] = (c, s)
        return c, s

    def _trig_float(self, key):
        hit = self._float_trig.get(key)
        if hit is None:
            (cl, ch), (sl, sh) = self.trig_enclosure(key[0], key[1], 96)
            hit = (float(cl), float(sl))
            self._float_trig[key] = hit
        return hit

    # evaluation ---------------------------------------------------------
    def to_float(self, x: "Real") -> float:
        tot = 0.0
        for key, (c, s) in x.terms.items():
            cf, sf = self._trig_float(key)
            if c:
                tot += float(c) * cf
            if s:
                tot += float(s) * sf
        return tot

    def _filter_sign(self, terms):
        tot = 0.0
        mag = 0.0
        n = 0
        for key, (c, s) in terms.items():
            cf, sf = self._trig_float(key)
            if c:
                fc = float(c)
                v = fc * cf
                tot += v
                mag += abs(fc) + abs(v)
                n += 1
            if s:
                fs = float(s)
                v = fs * sf
                tot += v
                mag += abs(fs) + abs(v)
                n += 1
        bound = (n + 4) * _FILTER_UNIT * mag
        if tot > bound:
            return 1
        if tot < -bound:
            return -1
        return None

    def enclose(self, x: "Real", prec: int | None = None):
        """Directed-rounding enclosure ``(lo, hi)`` of ``x`` as gmpy2 numbers."""
        prec = prec or self.precision
        r = _rounding(prec)
        lo = mpfr(0)
        hi = mpfr(0)
        for (j, k), (c, s) in x.terms.items():
            (cl, ch), (sl, sh) = self.trig_enclosure(j, k, prec)
            if c:
                lo = r.down.add(lo, _scale_down(r, c, cl, ch))
                hi = r.up.add(hi, _scale_up(r, c, cl, ch))
            if s:
                lo = r.down.add(lo, _scale_down(r, s, sl, sh))
                hi = r.up.add(hi, _scale_up(r, s, sl, sh))
        return lo, hi

    def abs_bound(self, x: "Real", prec: int | None = None):
        """Certified upper bound on ``|x|``."""
        lo, hi = self.enclose(x, prec)
        return max(abs(lo), abs(hi))

    def is_zero(self, x: "Real") -> bool:
        """Exact test for ``x == 0``."""
        if not x.terms:
            return True
        items = []
        n = 4
        for (j, k), (c, s) in x.terms.items():
            A, B = self.angle_of(j, k)
            items.append((A, B, c, s))
            n = _lcm(n, 2 * A.denominator)
        quarter = n // 4
        groups = defaultdict(lambda: defaultdict(Fraction))
        for A, B, c, s in items:
            e = int(A * n / 2)
            g = groups[B]
            g[e % n] += c / 2
            g[(e + quarter) % n] -= s / 2
            g = groups[-B]
            g[(-e) % n] += c / 2
            g[(-e + quarter) % n] += s / 2
        return all(_cyclotomic_is_zero(g, n) for g in groups.values())

    def sign(self, x: "Real") -> int:
        if not x.terms:
            return 0
        s = self._filter_sign(x.terms)
        if s is not None:
            return s
        prec = self.precision
        zero_tested = False
        while True:
            lo, hi = self.enclose(x, prec)
            if lo > 0:
                return 1
            if hi < 0:
                return -1
            if not zero_tested:
                if self.is_zero(x):
                    return 0
                zero_tested = True
            if prec >= self.max_precision:
                raise Undecided(f"sign not certified at {prec} bits", x)
            prec = min(2 * prec, self.max_precision)

    def decimal_enclosure(self, x: "Real", digits: int = 30, prec: int | None = None):
        """Outward-rounded decimal strings ``(lo, hi)`` enclosing ``x``."""
        lo, hi = self.enclose(x, prec)
        return _to_decimal(lo, digits, ROUND_FLOOR), _to_decimal(hi, digits, ROUND_CEILING)


def _to_decimal(v, digits: int, rounding) -> str:
    num, den = v.as_integer_ratio()
    ctx = Context(prec=digits, rounding=rounding)
    d = ctx.divide(Decimal(int(num)), Decimal(int(den)))
    return format(d, "e") if d and abs(d.adjusted()) > 6 else format(d, "f")


def _accumulate(terms: dict, j: int, k: int, c: Fraction, s: Fraction):
    if k < 0 or (k == 0 and j < 0):
        j, k, s = -j, -k, -s
    if j == 0 and k == 0:
        s = _ZERO
    if not c and not s:
        return
    old = terms.get((j, k))
    if old is not None:
        c += old[0]
        s += old[1]
    if c or s:
        terms[(j, k)] = (c, s)
    elif old is not None:
        del terms[(j, k)]


def _merge_field(a: "Real", b: "Real") -> Field:
    if a.field is b.field:
        return a.field
    if a.field.alpha != b.field.alpha:
        raise ValueError("cannot combine reals over different angles")
    if a.field.theta == b.field.theta:
        return a.field
    a_dir = any(k for _, k in a.terms)
    b_dir = any(k for _, k in b.terms)
    if a_dir and b_dir:
        raise ValueError("cannot combine reals measured along different directions")
    return b.field if b_dir or a.field.theta is None else a.field


class Real:
    """Exact real number ``sum c*cos(j*alpha - k*theta) + s*sin(j*alpha - k*theta)``.

    Comparisons are certified through the owning :class:`Field` and may raise
    :class:`~rhombus_billiards.errors.Undecided`.  Not hashable: equal values
    may have different term lists when alpha is a rational multiple of pi.
    """

    __slots__ = ("field", "terms")
    __hash__ = None

    def __init__(self, field: Field, terms: dict):
        self.field = field
        self.terms = terms

    def _other(self, other):
        if isinstance(other, Real):
            return other
        if isinstance(other, (int, Fraction)):
            return self.field.const(other)
        return NotImplemented

    def __add__(self, other):
        other = self._other(other)
        if other is NotImplemented:
            return other
        field = _merge_field(self, other)
        if len(self.terms) < len(other.terms):
            big, small = other.terms, self.terms
        else:
            big, small = self.terms, other.terms
        t = dict(big)
        for (j, k), (c, s) in small.items():
            _accumulate(t, j, k, c, s)
        return Real(field, t)

    __radd__ = __add__

    def __neg__(self):
        return Real(self.field, {key: (-c, -s) for key, (c, s) in self.terms.items()})

    def __sub__(self, other):
        other = self._other(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, q):
        if isinstance(q, Real):
            raise TypeError("products of two Reals are not supported")
        q = Fraction(q)
        if not q:
            return Real(self.field, {})
        return Real(self.field, {key: (c * q, s * q) for key, (c, s) in self.terms.items()})

    __rmul__ = __mul__

    def __truediv__(self, q):
        return self * (1 / Fraction(q))

    def sign(self) -> int:
        return self.field.sign(self)

    def _cmp(self, other) -> int:
        other = self._other(other)
        if other is NotImplemented:
            raise TypeError(f"cannot compare Real with {type(other).__name__}")
        return (self - other).sign()

    def __eq__(self, other):
        if not isinstance(other, (Real, int, Fraction)):
            return NotImplemented
        return self._cmp(other) == 0

    def __lt__(self, other):
        return self._cmp(other) < 0

    def __le__(self, other):
        return self._cmp(other) <= 0

    def __gt__(self, other):
        return self._cmp(other) > 0

    def __ge__(self, other):
        return self._cmp(other) >= 0

    def __abs__(self):
        return -self if self.sign() < 0 else self

    def __float__(self):
        return self.field.to_float(self)

    def __bool__(self):
        return self.sign() != 0

    def __repr__(self):
        return f"Real({float(self):.17g})"

    def is_exactly_zero(self) -> bool:
        return self.field.is_zero(self)

    def same_terms(self, other: "Real") -> bool:
        return self.terms == other.terms

    def to_json(self) -> list:
        out = []
        for (j, k), (c, s) in sorted(self.terms.items()):
            out.append([j, k, str(c), str(s)])
        return out

    @classmethod
    def from_json(cls, field: Field, data) -> "Real":
        t = {}
        for j, k, c, s in data:
            _accumulate(t, int(j), int(k), Fraction(c), Fraction(s))
        return cls(field, t)


class Pt:
    """Point ``(1/2) * sum a_j * exp(i*j*alpha)`` of the plane with integer ``a_j``."""

    __slots__ = ("coeffs", "_key")

    def __init__(self, coeffs=None):
        self.coeffs = {j: a for j, a in (coeffs or {}).items() if a}
        self._key = None

    @property
    def key(self):
        if self._key is None:
            self._key = tuple(sorted(self.coeffs.items()))
        return self._key

    def __eq__(self, other):
        return isinstance(other, Pt) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def __add__(self, other: "Pt") -> "Pt":
        out = dict(self.coeffs)
        for j, a in other.coeffs.items():
            out[j] = out.get(j, 0) + a
        return Pt(out)

    def __neg__(self) -> "Pt":
        return Pt({j: -a for j, a in self.coeffs.items()})

    def __sub__(self, other: "Pt") -> "Pt":
        return self + (-other)

    def shift(self, m: int) -> "Pt":
        """Multiply by ``exp(i*m*alpha)``."""
        return Pt({j + m: a for j, a in self.coeffs.items()})

    def reduce(self, period: int) -> "Pt":
        """Reduce exponents modulo ``period`` where ``z**period == 1``; no-op for period 0."""
        if not period:
            return self
        half = period // 2
        out = {}
        for j, a in self.coeffs.items():
            r = (j + half) % period - half
            out[r] = out.get(r, 0) + a
        return Pt(out)

    def conj(self) -> "Pt":
        return Pt({-j: a for j, a in self.coeffs.items()})

    def re(self, field: Field) -> Real:
        t = {}
        for j, a in self.coeffs.items():
            _accumulate(t, j, 0, Fraction(a, 2), _ZERO)
        return Real(field, t)

    def im(self, field: Field) -> Real:
        t = {}
        for j, a in self.coeffs.items():
            _accumulate(t, j, 0, _ZERO, Fraction(a, 2))
        return Real(field, t)

    def to_complex(self, alpha: float) -> complex:
        return sum(a * complex(math.cos(j * alpha), math.sin(j * alpha)) for j, a in self.coeffs.items()) / 2

    def __repr__(self):
        return f"Pt({dict(sorted(self.coeffs.items()))})"


def angle_sign(spec: AngleSpec, precision: int = 128, max_precision: int = 1024) -> int:
    """Certified sign of ``pi_coeff*pi + const``.

    Zero exactly when both coefficients vanish, because pi is irrational.
    Raises :class:`Undecided` if a nonzero value stays unresolved at the cap.
    """
    a, b = spec.pi_coeff, spec.const
    if not a and not b:
        return 0
    if not a:
        return 1 if b > 0 else -1
    prec = precision
    while True:
        r = _rounding(prec)
        pl, ph = r.down.const_pi(), r.up.const_pi()
        bl, bh = rational_enclosure(b, prec)
        lo = r.down.add(_scale_down(r, a, pl, ph), bl)
        hi = r.up.add(_scale_up(r, a, pl, ph), bh)
        if lo > 0:
            return 1
        if hi < 0:
            return -1
        if prec >= max_precision:
            raise Undecided(f"sign of {spec} not certified at {prec} bits")
        prec = min(2 * prec, max_precision)

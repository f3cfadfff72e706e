from decimal import Decimal
from fractions import Fraction

import mpmath
import pytest

from rhombus_billiards.angle import parse_angle
from rhombus_billiards.errors import Undecided
from rhombus_billiards.exact import Field, Pt, Real, angle_sign, cyclotomic


def test_cyclotomic_polynomials_small_orders():
    # coefficients listed from the constant term upward
    assert cyclotomic(1) == (-1, 1)
    assert cyclotomic(4) == (1, 0, 1)
    assert cyclotomic(5) == (1, 1, 1, 1, 1)
    assert cyclotomic(12) == (1, 0, -1, 0, 1)


def test_golden_identity_is_exact_zero_at_pi_over_5():
    f = Field(parse_angle("pi/5"))
    x = f.cos(1) - f.cos(2) - Fraction(1, 2)
    assert x.sign() == 0
    assert x.is_exactly_zero()
    assert x == f.zero()


def test_sin_pi_over_6_is_one_half():
    f = Field(parse_angle("pi/6"))
    assert (f.sin(1) - Fraction(1, 2)).sign() == 0
    assert f.sin(1) > Fraction(49, 100)


def test_no_false_zero_for_transcendental_angle():
    f = Field(parse_angle("0.7"))
    x = f.cos(1) - f.cos(2) - Fraction(1, 2)
    assert x.sign() == 1
    assert not f.is_zero(x)


def test_tiny_gap_resolved_by_escalation():
    f = Field(parse_angle("0.7"), precision=64, max_precision=1024)
    with mpmath.workdps(80):
        approx = Fraction(str(mpmath.cos(mpmath.mpf("0.7"))))
    gap = f.cos(1) - approx
    assert gap.sign() in (1, -1)
    assert abs(float(gap)) < 1e-60


def test_undecided_below_cap():
    f = Field(parse_angle("0.7"), precision=64, max_precision=128)
    with mpmath.workdps(80):
        approx = Fraction(str(mpmath.cos(mpmath.mpf("0.7"))))
    with pytest.raises(Undecided):
        (f.cos(1) - approx).sign()


def test_cos_is_even_and_sin_is_odd_in_storage():
    f = Field(parse_angle("0.7"))
    assert (f.cos(-3) - f.cos(3)).is_exactly_zero()
    assert (f.sin(-3) + f.sin(3)).is_exactly_zero()


@pytest.mark.parametrize("text", ["0.7", "pi/5", "pi/6 + 1/10"])
def test_decimal_enclosure_contains_high_precision_value(text):
    a = parse_angle(text)
    f = Field(a)
    x = f.cos(3) * 2 - f.sin(5) + Fraction(1, 3)
    lo, hi = f.decimal_enclosure(x, 30)
    with mpmath.workdps(60):
        al = mpmath.mpf(a.pi_coeff.numerator) / a.pi_coeff.denominator * mpmath.pi + \
            mpmath.mpf(a.const.numerator) / a.const.denominator
        ref = 2 * mpmath.cos(3 * al) - mpmath.sin(5 * al) + mpmath.mpf(1) / 3
        ref_d = Decimal(mpmath.nstr(ref, 50))
    assert Decimal(lo) <= ref_d <= Decimal(hi)
    assert Decimal(hi) - Decimal(lo) < Decimal("1e-28")


def test_real_json_round_trip():
    f = Field(parse_angle("0.7"))
    x = f.cos(1, coeff=Fraction(3, 7)) - f.sin(4) / 5
    y = Real.from_json(f, x.to_json())
    assert y.same_terms(x)


def test_angle_sign():
    assert angle_sign(parse_angle("pi/6 - 0.5235987755982988")) == 1
    assert angle_sign(parse_angle("pi/4 - 0.8")) == -1
    assert angle_sign(parse_angle("0")) == 0


def test_point_arithmetic_matches_complex():
    p = Pt({1: 1, 3: -2})
    q = Pt({0: 1})
    a = 0.7
    assert (p + q).to_complex(a) == pytest.approx(p.to_complex(a) + q.to_complex(a))
    assert p.conj().to_complex(a) == pytest.approx(p.to_complex(a).conjugate())
    f = Field(parse_angle("0.7"))
    assert float(p.re(f)) == pytest.approx(p.to_complex(a).real)
    assert float(p.im(f)) == pytest.approx(p.to_complex(a).imag)


def test_point_reduce_uses_root_of_unity():
    # at alpha = pi/5, z**10 = 1
    p = Pt({12: 1, 2: 1})
    assert p.reduce(10) == Pt({2: 2})

import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import NearVertex, naive_code
from rhombus_billiards import StopRule, make_triangle, parse_angle, trace_ray
from rhombus_billiards.errors import OutOfRange, ParseError
from rhombus_billiards.geometry import BUDGET, RETURNED, VERTEX

REVERSED = parse_angle("3*pi/2")


def test_pi_over_5_is_in_theorem_range():
    cfg = make_triangle("pi/5", 128)
    assert cfg.in_theorem_range
    assert cfg.root_period == 10


def test_quarter_turn_rejected():
    with pytest.raises(OutOfRange):
        make_triangle("pi/4")


@pytest.mark.parametrize("text", ["0", "-0.1", "0.8", "pi/3"])
def test_out_of_range_angles(text):
    with pytest.raises(OutOfRange):
        make_triangle(text)


def test_parse_error_propagates():
    with pytest.raises(ParseError):
        make_triangle("2*pi/7 + x")


def test_range_flag():
    assert make_triangle("0.7").in_theorem_range
    assert not make_triangle("pi/6").in_theorem_range
    assert not make_triangle("0.4").in_theorem_range
    # 0.5236 lies just above pi/6 = 0.52359877...
    assert make_triangle("0.5236").in_theorem_range


def test_rhombus_vertices_have_unit_sides(cfg07):
    v = {k: p.to_complex(cfg07.alpha) for k, p in cfg07.vertices().items()}
    assert v["E"] == pytest.approx(complex(math.cos(0.7), 0))
    assert v["N"] == pytest.approx(complex(0, math.sin(0.7)))
    for a, b in ("EN", "NW", "WS", "SE"):
        assert abs(v[a] - v[b]) == pytest.approx(1.0)
    assert float(cfg07.diagonal_length) == pytest.approx(2 * math.cos(0.7))


def test_left_endpoint_orbit_is_010(cfg07):
    tr = trace_ray(cfg07, cfg07.cos_alpha * -1, side=1)
    assert str(tr.code) == "0 1 0"
    assert tr.terminal.kind == RETURNED
    off = tr.terminal.offset
    assert -cfg07.cos_alpha < off < cfg07.cos_alpha


@pytest.mark.parametrize("alpha", ["0.7", "pi/5", "0.55", "0.3"])
def test_center_start_hits_obtuse_vertex(alpha):
    cfg = make_triangle(alpha)
    tr = trace_ray(cfg, 0, stop=StopRule.band_edge(-3, 3))
    assert str(tr.code) == "0"
    assert tr.terminal.kind == VERTEX
    assert tr.terminal.vertex.name == "N"
    assert tr.terminal.step == 0


def test_pi_over_5_orbit_is_even_palindrome(cfg_pi5):
    tr = trace_ray(cfg_pi5, cfg_pi5.cos_alpha * Fraction(3, 10))
    assert tr.periodic
    period = tr.period_code()
    assert period == period[::-1]
    assert period.p % 2 == 0
    # cross-check at doubled precision
    tr2 = trace_ray(cfg_pi5.with_precision(256, 2048), cfg_pi5.cos_alpha * Fraction(3, 10))
    assert tr2.code == tr.code


def test_known_codes_at_0_7(cfg07):
    assert str(trace_ray(cfg07, Fraction(-1, 2)).code) == "0 1 2 3 2 3 2 1 0"
    assert str(trace_ray(cfg07, Fraction(1, 5)).code) == "0 (-1) (-2) (-3) (-2) (-1) 0"


def test_center_passage_does_not_stop(cfg07):
    # the midpoint of the 010 beam passes through the center of the level-1 copy
    from rhombus_billiards import decompose_band
    bs = decompose_band(cfg07, 0, 2)
    beam = next(b for b in bs.beams if str(b.code) == "0 1 0")
    tr = trace_ray(cfg07, beam.midpoint)
    assert tr.terminal.kind == RETURNED
    assert [(e.step, e.level) for e in tr.center_passages] == [(1, 1)]


def test_budget_terminal_and_strict(cfg07):
    tr = trace_ray(cfg07, Fraction(-1, 2), stop=StopRule.step_budget(3))
    assert tr.terminal.kind == BUDGET
    assert tr.code.p == 3
    from rhombus_billiards.errors import StepBudgetExhausted
    with pytest.raises(StepBudgetExhausted):
        trace_ray(cfg07, Fraction(-1, 2), stop=StopRule.step_budget(3), strict=True)


xs = st.fractions(min_value=Fraction(-76, 100), max_value=Fraction(76, 100)).filter(lambda x: x != 0)


@settings(max_examples=40, deadline=None)
@given(xs)
def test_levels_change_by_one(x):
    cfg = make_triangle("0.7")
    tr = trace_ray(cfg, x, stop=StopRule.band_edge(-12, 12, 5000))
    lv = list(tr.code)
    assert lv[0] == 0
    assert all(abs(b - a) == 1 for a, b in zip(lv, lv[1:]))


@settings(max_examples=25, deadline=None)
@given(xs)
def test_precision_doubling_reproduces_code(x):
    cfg = make_triangle("0.7")
    a = trace_ray(cfg, x, stop=StopRule.band_edge(-10, 10, 5000))
    b = trace_ray(cfg.with_precision(256, 2048), x, stop=StopRule.band_edge(-10, 10, 5000))
    assert a.code == b.code
    assert a.terminal.kind == b.terminal.kind


@settings(max_examples=25, deadline=None)
@given(xs, st.integers(1, 25))
def test_reversed_ray_retraces_code(x, n):
    cfg = make_triangle("0.7")
    fwd = trace_ray(cfg, x, stop=StopRule.step_budget(n))
    if fwd.terminal.kind != BUDGET:
        return
    back = trace_ray(cfg, -x, REVERSED, StopRule.step_budget(n), start_center=fwd.centers[-1],
                     start_level=fwd.levels[-1])
    assert back.code == fwd.code[::-1]


def test_matches_folded_float_simulator():
    rng = random.Random(7)
    checked = 0
    for alpha in ("0.7", "0.62"):
        cfg = make_triangle(alpha)
        ca = math.cos(float(alpha))
        for _ in range(60):
            x = rng.uniform(-ca, ca)
            try:
                ref = naive_code(float(alpha), x)
            except NearVertex:
                continue
            if ref is None:
                continue
            assert list(trace_ray(cfg, Fraction(x)).code) == ref
            checked += 1
    assert checked >= 100


def test_non_perpendicular_heading_traces(cfg07):
    th = parse_angle("2*pi/5")
    tr = trace_ray(cfg07, Fraction(-1, 10), th, StopRule.band_edge(-6, 6, 2000))
    lv = list(tr.code)
    assert all(abs(b - a) == 1 for a, b in zip(lv, lv[1:]))
    assert tr.terminal.kind in (RETURNED, "band_edge", VERTEX)

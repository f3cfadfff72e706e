import dataclasses
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rhombus_billiards import (StopRule, center_hit_report, decompose_band, find_exceptional, half_period_symmetry,
                               make_triangle, parse_angle, propagate_beam, symmetry_residual, trace_ray)
from rhombus_billiards.beams import S0_PLUS, SN, start_interval
from rhombus_billiards.coding import ESCAPES_UP, RETURNING_DOWN, RETURNING_UP, reverse
from rhombus_billiards.errors import CountViolation


def codes(beams):
    return [str(b.code) for b in beams]


def test_band_0_1_has_two_beams(cfg07):
    bs = decompose_band(cfg07, 0, 1)
    assert codes(bs.beams) == ["0 1", "1 0"]
    assert bs.splits == []


def test_start_set_s0_is_single_beam_for_n_1(cfg07):
    iv = start_interval(cfg07, 0, 1)
    beams = propagate_beam(cfg07, iv, StopRule.band_edge(0, 1))
    assert codes(beams) == ["0 1"]
    assert beams[0].lo == iv[0] and beams[0].hi == iv[1]


def test_full_diagonal_splits_once_after_one_copy(cfg07):
    c = cfg07.cos_alpha
    splits = []
    beams = propagate_beam(cfg07, (c * -1, c), StopRule.step_budget(1), splits_out=splits)
    assert codes(beams) == ["0 1", "0 (-1)"]
    assert len(splits) == 1
    assert splits[0].vertex.name == "N"
    assert splits[0].t.sign() == 0


def test_band_0_8_counts_and_centers(cfg07):
    bs = decompose_band(cfg07, 0, 8)
    assert len(bs.beams) <= 9
    without_center = [b for b in bs.beams if not b.center_passages]
    assert len(without_center) <= 2
    assert {b.classify(bs.band) for b in without_center} <= {ESCAPES_UP, "EscapesDown"}


def test_stable_under_precision_doubling(cfg_pi5):
    a = decompose_band(cfg_pi5, 0, 4)
    b = decompose_band(cfg_pi5.with_precision(256, 2048), 0, 4)
    assert a.signature()[1:] == b.signature()[1:]


def test_exceptional_band_0_1(cfg07):
    up, down = find_exceptional(decompose_band(cfg07, 0, 1))
    assert str(up.code) == "0 1"
    assert str(down.code) == "1 0"


def test_down_code_reverses_up_code(cfg07):
    ex = find_exceptional(decompose_band(cfg07, 0, 5))
    assert ex.down.code == reverse(ex.up.code)
    assert ex.others_ok


def test_exceptional_unique_at_pi_over_5(cfg_pi5):
    ex = find_exceptional(decompose_band(cfg_pi5, 0, 3))
    assert ex.up.code[-1] == 3 and ex.down.code[0] == 3


def test_count_violation_on_tampered_set(cfg07):
    bs = decompose_band(cfg07, 0, 5)
    ex = find_exceptional(bs)
    bs.beams.append(ex.up)
    with pytest.raises(CountViolation):
        find_exceptional(bs)


def test_negative_side_mirrors_positive(cfg07):
    bs = decompose_band(cfg07, -4, 4)
    pos = find_exceptional(bs, "positive")
    neg = find_exceptional(bs, "negative")
    assert [-a for a in neg.up.code] == list(pos.up.code)
    assert (neg.up.lo + pos.up.hi).sign() == 0


def test_center_hit_for_010_beam(cfg07):
    bs = decompose_band(cfg07, 0, 2)
    beam = next(b for b in bs.beams if str(b.code) == "0 1 0")
    assert beam.center_passages == ((1, 1),)
    r = center_hit_report(beam)
    assert r.certified and r.value < 2.0 ** -80


def test_returning_beams_are_symmetric(cfg07):
    bs = decompose_band(cfg07, 0, 8)
    for b in bs.beams:
        cls = b.classify(bs.band)
        if cls in (RETURNING_UP, RETURNING_DOWN):
            assert half_period_symmetry(b)
            assert b.palindromic and b.p % 2 == 0


def test_exceptional_beam_is_not_symmetric(cfg07):
    up, _ = find_exceptional(decompose_band(cfg07, 0, 3))
    assert not half_period_symmetry(up)


def test_perturbed_beam_fails_symmetry(cfg07):
    bs = decompose_band(cfg07, 0, 4)
    b = next(b for b in bs.beams if b.classify(bs.band) == RETURNING_UP)
    bad = dataclasses.replace(b, hi=b.hi - Fraction(1, 1000))
    assert not half_period_symmetry(bad)
    assert symmetry_residual(bad).value > 1e-4


def test_tiling_of_start_sets(cfg07):
    bs = decompose_band(cfg07, -6, 6)
    for labels in (("S0+",), ("S0-",), ("SN",), ("SM",)):
        total = bs.start_width(*labels)
        widths = sum((b.width for b in bs.side(*labels)), bs.cfg.field.zero())
        assert (total - widths).is_exactly_zero()
        side = bs.side(*labels)
        for a, b in zip(side, side[1:]):
            assert (a.hi - b.lo).sign() == 0


def test_split_count_bound(cfg07):
    for n in range(1, 9):
        bs = decompose_band(cfg07, 0, n)
        assert len([s for s in bs.splits if s.start_set == S0_PLUS]) <= n - 1
        assert bs.count_from(S0_PLUS) <= n


def test_beam_code_matches_trace_of_midpoint(cfg07):
    bs = decompose_band(cfg07, 0, 6)
    for b in bs.side(S0_PLUS):
        tr = trace_ray(cfg07, b.midpoint, stop=StopRule.band_edge(0, 6))
        assert tr.code == b.code


def test_sn_beams_start_at_band_edge(cfg07):
    bs = decompose_band(cfg07, 0, 4)
    for b in bs.side(SN):
        assert b.code[0] == 4 and b.code[1] == 3


def test_adjacent_beams_split_in_first_rhombus():
    # found by scanning angles and directions; the two beams meet at vertex S of the
    # level-1 copy, visited for the second time at step 3
    cfg = make_triangle("0.3")
    bs = decompose_band(cfg, 0, 3, direction=parse_angle("7*pi/10"))
    side = bs.side(S0_PLUS)
    pair = [(a, b) for a, b in zip(side, side[1:]) if str(a.code) == "0 1 2 1 2 1 0"]
    assert len(pair) == 1
    a, b = pair[0]
    assert str(b.code) == "0 1 2 1 0"
    assert a.right.label == "S@1" and a.right.step == 3 and a.right.level == 1


@settings(max_examples=20, deadline=None)
@given(st.fractions(min_value=Fraction(1, 50), max_value=Fraction(49, 50)))
def test_beams_from_sub_seeds_agree(u):
    # any beam found from a piece of the start set that is not cut by the seed boundary
    # is the same beam as in the full decomposition
    cfg = make_triangle("0.7")
    stop = StopRule.band_edge(0, 6)
    lo, hi = start_interval(cfg, 0, 1)
    full = {tuple(b.code): b for b in propagate_beam(cfg, (lo, hi), stop)}
    cut = lo + (hi - lo) * u
    for seed in ((lo, cut), (cut, hi)):
        for b in propagate_beam(cfg, seed, stop):
            cut_left = b.left.kind == "start" and b.lo != lo
            cut_right = b.right.kind == "start" and b.hi != hi
            if cut_left or cut_right:
                continue
            ref = full[tuple(b.code)]
            assert (ref.lo - b.lo).is_exactly_zero() and (ref.hi - b.hi).is_exactly_zero()

"""Aggregate verification: the g_L loop, per-beam symmetry checks, sampling."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

from ..beams import (S0_MINUS, S0_PLUS, SM, SN, center_hit_report, find_exceptional, half_period_symmetry,
                     symmetry_residual)
from ..coding import RETURNING_DOWN, RETURNING_UP, Code, classify_code, is_palindrome, reverse
from ..errors import CountViolation, OutOfRange, Undecided
from ..geometry import RETURNED, UNDECIDED, VERTEX, StopRule, TriangleConfig, trace_ray
from .escape import cached_band, escape_bracket

PASS = "pass"
FAIL = "fail"
UNDECIDED_STATUS = "undecided"


@dataclass
class GLResult:
    ok: bool
    left_code: Code | None
    right_code: Code | None
    left_return: float | None
    right_return: float | None
    message: str = ""

    def __bool__(self):
        return self.ok


def _endpoint(cfg, sign):
    """Perpendicular orbit leaving an endpoint of L; sign -1 is the left endpoint."""
    x = cfg.cos_alpha * sign
    tr = trace_ray(cfg, x, side=-sign, stop=StopRule.first_return(64))
    if tr.terminal.kind == UNDECIDED:
        raise Undecided(tr.terminal.message)
    ok = tr.terminal.kind == RETURNED and tr.terminal.level == 0
    if ok:
        off = tr.terminal.offset
        ok = (off + cfg.cos_alpha).sign() > 0 and (cfg.cos_alpha - off).sign() > 0
    ret = float(tr.terminal.offset) if tr.terminal.offset is not None else None
    return tr, ok, ret


def gl_loop_check(cfg: TriangleConfig) -> GLResult:
    """Check that the orbit from the left end of L is coded 0 1 0 and comes back inside L.

    The mirror image from the right end (code 0 (-1) 0) is checked too.
    """
    left, lok, lret = _endpoint(cfg, -1)
    right, rok, rret = _endpoint(cfg, 1)
    ok = lok and rok and tuple(left.code) == (0, 1, 0) and tuple(right.code) == (0, -1, 0)
    msg = "" if ok else f"left {left.code} ({left.terminal.kind}), right {right.code} ({right.terminal.kind})"
    return GLResult(ok, left.code, right.code, lret, rret, msg)


def beam_checks(beam, precision: int) -> dict:
    """The three symmetry statements for one returning beam, each evaluated on its own."""
    pal = is_palindrome(beam.code) and beam.p % 2 == 0
    ch = center_hit_report(beam, precision)
    sym = symmetry_residual(beam, precision)
    hp = half_period_symmetry(beam, precision)
    return {
        "code": str(beam.code),
        "start_set": beam.start_set,
        "palindrome_even": pal,
        "center_hit": ch.certified,
        "center_residual": ch.value,
        "half_period": hp,
        "symmetry_residual": sym.value,
        "agree": pal == ch.certified == hp,
    }


def _status(ok) -> str:
    return PASS if ok else FAIL


def verify_all(cfg: TriangleConfig, N: int, *, precision: int | None = None) -> dict:
    """Run every check for the band ``-N..N`` and return a JSON-ready report."""
    if not cfg.in_theorem_range:
        raise OutOfRange(f"alpha = {cfg.alpha_spec} is outside (pi/6, pi/4)")
    prec = precision or cfg.precision_bits
    checks = []

    def add(name, ok, **extra):
        status = ok if isinstance(ok, str) else _status(ok)
        checks.append({"name": name, "status": status, **extra})

    try:
        gl = gl_loop_check(cfg)
        add("gl_loop", gl.ok, left=str(gl.left_code), right=str(gl.right_code))
    except Undecided as exc:
        add("gl_loop", UNDECIDED_STATUS, message=str(exc))

    beams_report = []
    try:
        bs = cached_band(cfg, -N, N)
        for side, labels, edge in (("positive", (S0_PLUS, SN), N), ("negative", (S0_MINUS, SM), -N)):
            try:
                ex = find_exceptional(bs, side)
                add(f"exceptional_unique_{side}", True, up=str(ex.up.code), down=str(ex.down.code))
                add(f"exceptional_reversal_{side}", tuple(ex.down.code) == tuple(reverse(ex.up.code)))
                add(f"others_returning_palindromic_{side}", ex.others_ok)
            except CountViolation as exc:
                add(f"exceptional_unique_{side}", False, message=str(exc))
            count_01 = sum(1 for b in bs.side(labels[0]))
            add(f"count_bound_{side}", count_01 <= N and len(bs.side(*labels)) <= N + 1,
                from_level0=count_01, total=len(bs.side(*labels)))
        for b in bs.beams:
            if classify_code(b.code, bs.band) in (RETURNING_UP, RETURNING_DOWN):
                beams_report.append(beam_checks(b, prec))
        add("symmetry_palindrome_even", all(r["palindrome_even"] for r in beams_report))
        add("symmetry_center_hit", all(r["center_hit"] for r in beams_report),
            residual=max((r["center_residual"] for r in beams_report), default=0.0))
        add("symmetry_half_period", all(r["half_period"] for r in beams_report),
            residual=max((r["symmetry_residual"] for r in beams_report), default=0.0))
        add("symmetry_equivalence", all(r["agree"] for r in beams_report))
        for side in ("positive", "negative"):
            seq = escape_bracket(cfg, N, side)
            add(f"bracket_nested_{side}", all(seq.nested()) and seq.widths_nonincreasing(),
                widths=seq.widths())
    except Undecided as exc:
        add("beams", UNDECIDED_STATUS, message=str(exc))

    statuses = {c["status"] for c in checks}
    overall = FAIL if FAIL in statuses else (UNDECIDED_STATUS if UNDECIDED_STATUS in statuses else PASS)
    return {
        "alpha_spec": cfg.alpha_spec.canonical,
        "precision": prec,
        "N": N,
        "status": overall,
        "checks": checks,
        "beams_ref": beams_report,
        "timestamps": None,
    }


@dataclass
class FoliationStats:
    samples: int
    inside_bracket: int
    periodic: int
    singular: int
    unresolved: int
    bracket_fraction: float
    details: list = field(default_factory=list)

    @property
    def outside(self) -> int:
        return self.samples - self.inside_bracket

    def fraction(self, kind: str) -> float:
        n = self.outside
        return getattr(self, kind) / n if n else 0.0


def foliation_sample(cfg: TriangleConfig, sample_count: int, N_cap: int | None, *, seed: int = 0,
                     max_steps: int = 20_000, keep_details: bool = False) -> FoliationStats:
    """Trace uniformly sampled perpendicular starts on L.

    Starts inside either escape bracket at band ``N_cap`` are counted apart;
    with ``N_cap=None`` no bracket is computed and every start is traced.
    The others are traced until they return; they are tallied as periodic,
    singular (vertex hit) or unresolved (budget or uncertified decision).
    """
    rng = random.Random(seed)
    ca = float(cfg.cos_alpha)
    brackets = []
    for side in ("positive", "negative") if N_cap else ():
        e = escape_bracket(cfg, N_cap, side, N_min=N_cap).last
        brackets.append((e.lo, e.hi))
    bracket_width = sum(float(b - a) for a, b in brackets)
    stats = FoliationStats(sample_count, 0, 0, 0, 0, bracket_width / (2 * ca))
    f = cfg.field
    for _ in range(sample_count):
        x = f.const(Fraction(rng.uniform(-ca, ca)))
        if any(a < x < b for a, b in brackets):
            stats.inside_bracket += 1
            continue
        tr = trace_ray(cfg, x, stop=StopRule.first_return(max_steps))
        kind = tr.terminal.kind
        if kind == RETURNED:
            stats.periodic += 1
        elif kind == VERTEX:
            stats.singular += 1
        else:
            stats.unresolved += 1
        if keep_details:
            stats.details.append((float(x), kind, tr.code.p))
    return stats

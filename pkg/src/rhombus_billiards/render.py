"""Matplotlib pictures of unfoldings, beam strips and report series.

SVG output is made deterministic by fixing matplotlib's hash salt and
dropping the date from the metadata.
"""

from __future__ import annotations

import io
import math

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
from matplotlib.patches import Polygon  # noqa: E402

from .beams import BeamSet  # noqa: E402
from .geometry import VERTICES, Trajectory, apply_linear  # noqa: E402

_RC = {"svg.hashsalt": "rhombus-billiards", "svg.fonttype": "none", "path.simplify": False}


def _level_color(level: int, lo: int, hi: int):
    cmap = plt.get_cmap("coolwarm")
    span = max(hi - lo, 1)
    return cmap((level - lo) / span)


def _copy_polygon(center, level, alpha: float):
    c = center.to_complex(alpha)
    pts = [c + apply_linear(level, VERTICES[v]).to_complex(alpha) for v in "ENWS"]
    return [(p.real, p.imag) for p in pts], c


def _draw_copies(ax, levels, centers, alpha, lo, hi, label=True, seen=None):
    seen = seen if seen is not None else set()
    for level, center in zip(levels, centers):
        key = (level, center)
        if key in seen:
            continue
        seen.add(key)
        pts, c = _copy_polygon(center, level, alpha)
        ax.add_patch(Polygon(pts, closed=True, facecolor=_level_color(level, lo, hi), alpha=0.25,
                             edgecolor="0.3", linewidth=0.6))
        ax.plot([c.real], [c.imag], marker="o", markersize=1.5, color="0.2")
        if label:
            ax.text(c.real, c.imag, str(level), fontsize=6, ha="center", va="bottom")
    return seen


def _save(fig, path=None, fmt="svg") -> str | bytes:
    buf = io.BytesIO() if fmt != "svg" else io.StringIO()
    meta = {"Date": None} if fmt == "svg" else None
    fig.savefig(buf, format=fmt, metadata=meta)
    plt.close(fig)
    data = buf.getvalue()
    if path is not None:
        mode = "w" if isinstance(data, str) else "wb"
        with open(path, mode) as fh:
            fh.write(data)
    return data


def render_unfolding_svg(obj=None, path=None, *, title: str | None = None, fmt: str = "svg"):
    """Draw a :class:`Trajectory` or a :class:`BeamSet`; ``None`` gives an empty scene."""
    with plt.rc_context(_RC):
        fig, ax = plt.subplots(figsize=(6, 6))
        ax.set_aspect("equal")
        ax.set_axis_off()
        if isinstance(obj, Trajectory):
            _render_trajectory(ax, obj)
        elif isinstance(obj, BeamSet):
            _render_beamset(ax, obj)
        if title:
            ax.set_title(title, fontsize=9)
        if obj is not None:
            ax.autoscale_view()
        return _save(fig, path, fmt)


def _render_trajectory(ax, tr: Trajectory):
    a = tr.cfg.alpha
    lo, hi = min(tr.levels), max(tr.levels)
    _draw_copies(ax, tr.levels, tr.centers, a, lo, hi)
    segs = tr.polyline()
    xs = [segs[0][0].real] + [s[1].real for s in segs]
    ys = [segs[0][0].imag] + [s[1].imag for s in segs]
    singular = tr.terminal.kind == "vertex"
    ax.plot(xs, ys, color="k", linewidth=1.0, linestyle="--" if singular else "-")
    ax.text(xs[0], ys[0], "code " + str(tr.code), fontsize=7, ha="left", va="top")


def _render_beamset(ax, bs: BeamSet):
    a = bs.cfg.alpha
    th = float(bs.direction)
    d = complex(math.cos(th), math.sin(th))
    perp = d * 1j
    lo, hi = bs.band
    seen = set()
    for b in bs.beams:
        # beams starting on a band edge are drawn beside the level-0 picture
        shift = complex(3.0 if b.start_set in ("SN", "SM") else 0.0, 0.0)
        for level, center in zip(b.code, b.centers):
            key = (level, center, shift)
            if key in seen:
                continue
            seen.add(key)
            pts, _ = _copy_polygon(center, level, a)
            ax.add_patch(Polygon([(x + shift.real, y + shift.imag) for x, y in pts], closed=True,
                                 facecolor=_level_color(level, lo, hi), alpha=0.12, edgecolor="0.5",
                                 linewidth=0.4))
        t_lo, t_hi = float(b.lo), float(b.hi)
        longs = [(c.to_complex(a) * d.conjugate()).real for c in b.centers]
        l0, l1 = min(longs), max(longs)
        corners = [(-perp * t + d * l) + shift for t, l in ((t_lo, l0), (t_hi, l0), (t_hi, l1), (t_lo, l1))]
        color = "tab:red" if b.start_level != b.end_level else "tab:blue"
        ax.add_patch(Polygon([(p.real, p.imag) for p in corners], closed=True, facecolor=color, alpha=0.35,
                             edgecolor="none"))
        for t in (t_lo, t_hi):
            p0, p1 = (-perp * t + d * l0) + shift, (-perp * t + d * l1) + shift
            ax.plot([p0.real, p1.real], [p0.imag, p1.imag], color="k", linewidth=0.5, linestyle="--")
        for step, level in b.center_passages:
            c = b.centers[step].to_complex(a) + shift
            ax.plot([c.real], [c.imag], marker="x", color="k", markersize=4)
    ax.set_title(f"band {lo}..{hi}", fontsize=8)


def render_series(xs, series: dict, path=None, *, xlabel: str = "N", ylabel: str = "", title: str = "",
                  logy: bool = False, fmt: str | None = None):
    """Line plot of named series, used by the report commands."""
    fmt = fmt or (str(path).rsplit(".", 1)[-1] if path else "svg")
    with plt.rc_context(_RC):
        fig, ax = plt.subplots(figsize=(5, 3.5))
        for name, ys in series.items():
            ax.plot(xs, ys, marker="o", markersize=3, label=name)
        if logy:
            ax.set_yscale("log")
        ax.set_xlabel(xlabel)
        ax.set_ylabel(ylabel)
        if title:
            ax.set_title(title, fontsize=9)
        if len(series) > 1:
            ax.legend(fontsize=7)
        fig.tight_layout()
        return _save(fig, path, fmt)

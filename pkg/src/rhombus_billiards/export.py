"""JSON and CSV serialization of beam sets and reports.

Every interval endpoint is written three ways: an outward-rounded decimal
enclosure, a plain decimal approximation, and the exact term list that lets
:func:`import_beams_json` rebuild the identical :class:`BeamSet`.
"""

from __future__ import annotations

import csv
import io
import json
from pathlib import Path

from .angle import parse_angle
from .beams import Beam, BeamSet, Bound, Split, centers_from_code
from .coding import parse_code
from .exact import Pt, Real
from .geometry import VertexHit, make_triangle

FORMAT_VERSION = 1
DIGITS = 30


def enclosure(x: Real, digits: int = DIGITS, prec: int | None = None) -> list:
    lo, hi = x.field.decimal_enclosure(x, digits, prec)
    return [lo, hi]


def _bound_json(b: Bound) -> dict:
    return {"kind": b.kind, "label": b.label, "step": b.step, "level": b.level}


def beam_record(beam: Beam, band: tuple, prec: int) -> dict:
    lo_enc = enclosure(beam.lo, prec=prec)
    hi_enc = enclosure(beam.hi, prec=prec)
    j_lo, j_hi = beam.J
    return {
        "I": [lo_enc[0], hi_enc[1]],
        "I_enclosure": {"lo": lo_enc, "hi": hi_enc},
        "I_exact": {"lo": beam.lo.to_json(), "hi": beam.hi.to_json()},
        "J": [enclosure(j_lo, prec=prec)[0], enclosure(j_hi, prec=prec)[1]],
        "width": float(beam.width),
        "code": str(beam.code),
        "p": beam.p,
        "start_set": beam.start_set,
        "terminal": beam.terminal,
        "bounds": [_bound_json(beam.left), _bound_json(beam.right)],
        "flags": beam.flags(band),
    }


def beamset_to_dict(bs: BeamSet) -> dict:
    cfg = bs.cfg
    prec = cfg.precision_bits
    return {
        "version": FORMAT_VERSION,
        "alpha_spec": cfg.alpha_spec.canonical,
        "precision": prec,
        "max_precision": cfg.max_precision_bits,
        "direction": bs.direction.canonical,
        "band": list(bs.band),
        "start_sets": {k: {"I": [enclosure(lo, prec=prec)[0], enclosure(hi, prec=prec)[1]],
                           "exact": [lo.to_json(), hi.to_json()]}
                       for k, (lo, hi) in sorted(bs.start_sets.items())},
        "beams": [beam_record(b, bs.band, prec) for b in bs.beams],
        "splits": [{"t": enclosure(s.t, prec=prec), "t_exact": s.t.to_json(), "vertex": s.vertex.label,
                    "name": s.vertex.name, "level": s.vertex.level, "step": s.vertex.step,
                    "start_set": s.start_set} for s in bs.splits],
        "degenerate": [{"t": enclosure(d.lo, prec=prec), "vertex": d.left.label, "center": d.right.label,
                        "start_set": d.start_set} for d in bs.degenerate],
    }


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def export_beams_json(bs: BeamSet, path=None) -> str:
    """Serialize ``bs``; also write it to ``path`` when one is given."""
    text = dumps(beamset_to_dict(bs))
    if path is not None:
        Path(path).write_text(text)
    return text


def import_beams_json(source) -> BeamSet:
    """Inverse of :func:`export_beams_json`; accepts a path, a JSON string or a dict."""
    if isinstance(source, dict):
        data = source
    else:
        text = str(source)
        if not text.lstrip().startswith("{"):
            text = Path(source).read_text()
        data = json.loads(text)
    if data.get("version") != FORMAT_VERSION:
        raise ValueError(f"unsupported beam table version {data.get('version')}")
    cfg = make_triangle(data["alpha_spec"], data["precision"], data["max_precision"])
    direction = parse_angle(data["direction"])
    f = cfg.field
    band = tuple(data["band"])
    beams = []
    for r in data["beams"]:
        code = parse_code(r["code"])
        lo = Real.from_json(f, r["I_exact"]["lo"])
        hi = Real.from_json(f, r["I_exact"]["hi"])
        centers = centers_from_code(cfg, code, direction, Pt())
        left, right = (Bound(b["kind"], b["label"], b["step"], b["level"]) for b in r["bounds"])
        passages = tuple(tuple(c) for c in r["flags"]["contains_center"])
        beams.append(Beam(cfg, direction, lo, hi, code, centers, r["terminal"], left, right,
                          r["start_set"], passages))
    splits = []
    for s in data["splits"]:
        splits.append(Split(Real.from_json(f, s["t_exact"]),
                            VertexHit(s["name"], s["level"], s["step"], None), s["start_set"]))
    start_sets = {k: (Real.from_json(f, v["exact"][0]), Real.from_json(f, v["exact"][1]))
                  for k, v in data["start_sets"].items()}
    return BeamSet(cfg, band, beams, splits, [], direction, start_sets)


def rows_to_csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow(row)
    return buf.getvalue()


def beamset_csv(bs: BeamSet) -> str:
    d = beamset_to_dict(bs)
    rows = [(b["start_set"], b["code"], b["p"], b["I"][0], b["I"][1], b["width"], b["flags"]["class"],
             b["flags"]["palindromic"]) for b in d["beams"]]
    return rows_to_csv(["start_set", "code", "p", "I_lo", "I_hi", "width", "class", "palindromic"], rows)

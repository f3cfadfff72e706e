"""Perpendicular billiard trajectories in right triangles, studied through unfoldings of the rhombus."""

__version__ = "0.1.0"

from .angle import PERPENDICULAR, AngleSpec, angle, parse_angle
from .beams import (Beam, BeamSet, Exceptional, decompose_band, find_exceptional, half_period_symmetry,
                    propagate_beam, symmetry_residual, center_hit_report)
from .coding import Code, classify_code, format_code, is_palindrome, parse_code, reverse_negate
from .errors import (BilliardError, CountViolation, LengthMismatch, MalformedCode, OutOfRange, ParseError,
                     StepBudgetExhausted, SymmetryViolation, UndecidableRange, Undecided)
from .exact import Field, Pt, Real
from .export import export_beams_json, import_beams_json
from .geometry import StopRule, Trajectory, TriangleConfig, make_triangle, trace_ray
from .render import render_unfolding_svg

__all__ = [
    "PERPENDICULAR", "AngleSpec", "angle", "parse_angle",
    "Beam", "BeamSet", "Exceptional", "decompose_band", "find_exceptional", "half_period_symmetry",
    "propagate_beam", "symmetry_residual", "center_hit_report",
    "Code", "classify_code", "format_code", "is_palindrome", "parse_code", "reverse_negate",
    "BilliardError", "CountViolation", "LengthMismatch", "MalformedCode", "OutOfRange", "ParseError",
    "StepBudgetExhausted", "SymmetryViolation", "UndecidableRange", "Undecided",
    "Field", "Pt", "Real", "export_beams_json", "import_beams_json",
    "StopRule", "Trajectory", "TriangleConfig", "make_triangle", "trace_ray", "render_unfolding_svg",
]

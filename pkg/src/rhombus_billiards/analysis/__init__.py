"""Return maps, escape brackets, coverage, verification reports and the two-particle gas map."""

from .checks import foliation_sample, gl_loop_check, verify_all
from .escape import coverage_fraction, escape_bracket
from .gas import collision_sequence, gas_map
from .iet import IET, iet_classify, rotation
from .returnmap import build_return_map, ghost_complete

__all__ = ["foliation_sample", "gl_loop_check", "verify_all", "coverage_fraction", "escape_bracket",
           "collision_sequence", "gas_map", "IET", "iet_classify", "rotation", "build_return_map",
           "ghost_complete"]

"""Analysis of planar curves 2*pi-periodic in x: self-intersections,
cylinder winding numbers, short-loop and curvature-bound certification."""

from .curves import (ArcCurve, CurveSpec, build_curve, max_curvature,
                     reparametrize_arclength, turning_delta)
from .topology import (Crossing, CylinderPoint, Loop, classify_crossing,
                       extract_winding_one_subloop, find_crossings,
                       minimal_subloop, perturb_to_general_position, project,
                       winding_number)
from .verify import (AnalysisReport, analyze, check_curvature_bound,
                     locate_short_loop, loop_total_curvature,
                     oracle_min_loop, random_curve, schur_chord_compare,
                     umlaufsatz_check, verify_prop_c)

__all__ = [
    "ArcCurve", "CurveSpec", "build_curve", "max_curvature",
    "reparametrize_arclength", "turning_delta",
    "Crossing", "CylinderPoint", "Loop", "classify_crossing",
    "extract_winding_one_subloop", "find_crossings", "minimal_subloop",
    "perturb_to_general_position", "project", "winding_number",
    "AnalysisReport", "analyze", "check_curvature_bound",
    "locate_short_loop", "loop_total_curvature", "oracle_min_loop",
    "random_curve", "schur_chord_compare", "umlaufsatz_check",
    "verify_prop_c",
]

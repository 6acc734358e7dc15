"""Triangulations of 3-manifolds with torus boundary."""
from .core import (
    Triangulation,
    TriangulationError,
    ValidationReport,
    disjoint_union,
    perm_inverse,
    perm_sign,
    validate,
)
from .frames import (
    BoundaryFrame,
    FrameError,
    GluingRecord,
    check_frame,
    fill_by_layered_solid_torus,
    frame_from_slopes,
    glue_high_distance,
    is_normalized,
    layer,
    layer_fibonacci,
    layered_solid_torus,
    normalize_frame,
)
from .homology import H1, homology_h1, smith_invariants

__all__ = [
    "Triangulation",
    "TriangulationError",
    "ValidationReport",
    "disjoint_union",
    "perm_inverse",
    "perm_sign",
    "validate",
    "BoundaryFrame",
    "FrameError",
    "GluingRecord",
    "check_frame",
    "fill_by_layered_solid_torus",
    "frame_from_slopes",
    "glue_high_distance",
    "is_normalized",
    "layer",
    "layer_fibonacci",
    "layered_solid_torus",
    "normalize_frame",
    "H1",
    "homology_h1",
    "smith_invariants",
]

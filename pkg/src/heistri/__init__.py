"""Heisenberg group geometry: grids, PL simplexes, chains, triangulations."""

from .core import (
    AffineScalarField,
    HPoint,
    LieVector,
    dilate,
    exp_map,
    grad_h_affine,
    horizontal_frame,
    inv,
    koranyi_dist,
    koranyi_norm,
    log_map,
    mul,
    on_same_orbit,
    origin,
    point_from_json,
    point_to_json,
    translate,
    w_tilde,
)
from .grid import (
    Cube,
    Face,
    Regularity,
    RegularityReport,
    Side,
    Subface,
    face_regularity,
    faces,
    grid_cover,
    report_to_json,
    subface_regularity,
    subfaces,
    wedge_horizontal,
)
from .horizontal import (
    build_map,
    cone_relation_residual,
    cone_to_apex,
    exp_center_of_gravity,
    horizontal_path,
    hybrid_simplex,
    map_segments,
    segment_is_horizontal,
    segment_residual,
)
from .simplex import (
    Barycentric,
    Builder,
    Chain,
    PLCell,
    PLMap,
    SimplexDescriptor,
    affine_simplex,
    barycenter,
    barycentric_vertex,
    boundary,
    chain_from_json,
    chain_to_json,
    face_map,
    map_consistency,
    restrict_face,
    sample_barycentric,
    simplex_chain,
    standard_simplex,
    straight_simplex,
)
from .triangulation import (
    CornerAssignment,
    IncreasingMap,
    TriangulationChain,
    boundary_of_triangulation,
    export_mesh,
    increasing_maps,
    orientation_sign,
    triangulate_cube,
    triangulate_region,
)

__version__ = "0.1.0"

"""Length-bounded connectivity augmentation and cycle morphing for planar
straight-line graphs."""

from .geom import (
    CCW,
    COLLINEAR,
    CONVEX,
    CW,
    REFLEX,
    DegenerateInput,
    Point,
    Segment,
    ccw_angle_class,
    convex_hull,
    incircle,
    length,
    orient,
    properly_cross,
)
from .pslg import (
    CollinearTriple,
    ConnectivityReport,
    ConvexWalkSet,
    CrossingEdges,
    DualGraph,
    DuplicatePoint,
    EdgeThroughVertex,
    FacialWalk,
    InvalidInstance,
    LemmaViolation,
    Pslg,
    PslgError,
    Walk,
    build,
    connectivity,
    convex_walk_decomposition,
    dual_graph,
    facial_walks,
)
from .geodesic import (
    FaceRegion,
    GeodesicPath,
    NotSafeWalk,
    WalkNotInFace,
    check_lemma1,
    face_region,
    geodesic,
)
from .heuristic import (
    EDGE_2EC,
    VERTEX_2VC,
    AugmentationResult,
    augment_2ec,
    augment_2vc,
    split_into_short_walks,
)
from .optimal import (
    IndexedWalk,
    InfeasibleFace,
    OptimalResult,
    cut_structure,
    dp_2ec,
    dp_2vc,
    feasibility,
    optimal_augment,
)
from .oracle import (
    CandidateSet,
    Exhausted,
    brute_force_optimal,
    exhaustive_optimal,
    verify,
)
from .transform import (
    OpLog,
    OpStep,
    ReplayViolation,
    WeaklySimplePolygon,
    euclidean_mst,
    replay,
    transform,
)
from .instances import generate, instance_hash, load, parse, serialize
from .render import render_svg

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"

"""L_q-norm zonoid depths, the classical zonoid and Mahalanobis depths, and their contours."""

from .contour import ContourPolyline, check_nested_convex, contour_polyline, contour_set, ray_boundary_point
from .data import ScenarioSpec, generate, load_animals, load_csv
from .depths import (
    DataCloud,
    DepthOrder,
    DepthResult,
    SolverConfig,
    batch_depth,
    in_convex_hull,
    lq_depth,
    mahalanobis_depth,
    zonoid_depth,
)
from .estimator import LqZonoidDepth, MahalanobisDepth, ZonoidDepth
from .exceptions import (
    ConvergenceFailure,
    DepthError,
    DimensionMismatch,
    Infeasible,
    ParseError,
    RankDeficient,
    SingularCovariance,
    SolverFailure,
)

__version__ = "0.1.0"

__all__ = [
    "ContourPolyline",
    "ConvergenceFailure",
    "DataCloud",
    "DepthError",
    "DepthOrder",
    "DepthResult",
    "DimensionMismatch",
    "Infeasible",
    "LqZonoidDepth",
    "MahalanobisDepth",
    "ParseError",
    "RankDeficient",
    "ScenarioSpec",
    "SingularCovariance",
    "SolverConfig",
    "SolverFailure",
    "ZonoidDepth",
    "batch_depth",
    "check_nested_convex",
    "contour_polyline",
    "contour_set",
    "generate",
    "in_convex_hull",
    "load_animals",
    "load_csv",
    "lq_depth",
    "mahalanobis_depth",
    "ray_boundary_point",
    "zonoid_depth",
]

from .geometry import (
    DimensionError, EmptyPolytopeError, HalfspaceSystem, Polytope, UnboundedError,
    contains_point, contains_polytope, convex_hull, enumerate_vertices, hausdorff_distance,
    maximize_with_tiebreak, point_distance, polytopes_equal, simplex_system, solve_lp, vec,
)
from .lp import INFEASIBLE, OPTIMAL, UNBOUNDED, LPResult

__all__ = [
    "DimensionError", "EmptyPolytopeError", "HalfspaceSystem", "Polytope", "UnboundedError",
    "contains_point", "contains_polytope", "convex_hull", "enumerate_vertices",
    "hausdorff_distance", "maximize_with_tiebreak", "point_distance", "polytopes_equal",
    "simplex_system", "solve_lp", "vec", "INFEASIBLE", "OPTIMAL", "UNBOUNDED", "LPResult",
]

"""Exact low-dimensional polytope operations.

Points are tuples of :class:`~fractions.Fraction`. A :class:`Polytope` carries
a vertex list, a halfspace system, or both.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from . import lp
from .dd import UnboundedError, cone_extreme_rays
from .linalg import integerize, solve_affine

Vector = tuple  # tuple[Fraction, ...]

MAX_ENUM_DIM = 16

__all__ = [
    "Vector", "HalfspaceSystem", "Polytope", "EmptyPolytopeError", "UnboundedError",
    "DimensionError", "vec", "solve_lp", "convex_hull", "enumerate_vertices",
    "contains_point", "polytopes_equal", "maximize_with_tiebreak", "hausdorff_distance",
    "point_distance", "simplex_system", "MAX_ENUM_DIM",
]


class DimensionError(ValueError):
    pass


class EmptyPolytopeError(ValueError):
    pass


def vec(values: Iterable) -> Vector:
    return tuple(Fraction(v) for v in values)


def dot(a: Sequence, b: Sequence) -> Fraction:
    return sum((x * y for x, y in zip(a, b) if x and y), Fraction(0))


@dataclass(frozen=True)
class HalfspaceSystem:
    """``normal . x <= offset`` rows plus ``normal . x == offset`` equalities."""

    dim: int
    rows: tuple = ()
    equalities: tuple = ()

    def __post_init__(self):
        rows = tuple((vec(a), Fraction(b)) for a, b in self.rows)
        eqs = tuple((vec(a), Fraction(b)) for a, b in self.equalities)
        for a, _ in rows + eqs:
            if len(a) != self.dim:
                raise DimensionError(f"normal of length {len(a)} in a {self.dim}-dim system")
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "equalities", eqs)

    def satisfied_by(self, x: Sequence) -> bool:
        return (all(dot(a, x) <= b for a, b in self.rows)
                and all(dot(a, x) == b for a, b in self.equalities))

    def extend(self, rows=(), equalities=()) -> "HalfspaceSystem":
        return HalfspaceSystem(self.dim, self.rows + tuple(rows),
                               self.equalities + tuple(equalities))


@dataclass(frozen=True)
class Polytope:
    dim: int
    vertices: tuple | None = None
    halfspaces: HalfspaceSystem | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.vertices is None and self.halfspaces is None:
            raise ValueError("polytope needs a vertex or halfspace representation")
        if self.vertices is not None:
            vs = tuple(vec(v) for v in self.vertices)
            for v in vs:
                if len(v) != self.dim:
                    raise DimensionError("vertex dimension mismatch")
            object.__setattr__(self, "vertices", vs)

    @property
    def is_empty(self) -> bool:
        return self.vertices is not None and len(self.vertices) == 0

    def with_vertices(self) -> "Polytope":
        if self.vertices is not None:
            return self
        return enumerate_vertices(self.halfspaces)


def simplex_system(dim: int) -> HalfspaceSystem:
    rows = []
    for k in range(dim):
        a = [0] * dim
        a[k] = -1
        rows.append((a, 0))
    return HalfspaceSystem(dim, rows, [([1] * dim, 1)])


# ---------------------------------------------------------------------------
# linear programming


def solve_lp(objective: Sequence, constraints: HalfspaceSystem, sense: str = "max") -> lp.LPResult:
    """Exact LP over a general polyhedron with free variables."""
    n = constraints.dim
    if len(objective) != n:
        raise DimensionError("objective and constraint dimensions differ")
    if sense not in ("max", "min"):
        raise ValueError("sense must be 'max' or 'min'")
    c = [Fraction(v) for v in objective]
    if sense == "max":
        c = [-v for v in c]

    # rows of the form -x_k <= 0 become sign restrictions, not constraints
    nonneg = [False] * n
    rows = []
    for a, b in constraints.rows:
        nz = [(k, v) for k, v in enumerate(a) if v != 0]
        if b == 0 and len(nz) == 1 and nz[0][1] < 0:
            nonneg[nz[0][0]] = True
        else:
            rows.append((a, b))
    # column map: each free variable becomes a +/- pair
    cols = []
    for k in range(n):
        cols.append((k, 1))
        if not nonneg[k]:
            cols.append((k, -1))
    ns = len(rows)
    width = len(cols) + ns
    A, b = [], []
    for r, (a, off) in enumerate(rows):
        row = [a[k] * s for k, s in cols] + [Fraction(0)] * ns
        row[len(cols) + r] = Fraction(1)
        A.append(row)
        b.append(off)
    for a, off in constraints.equalities:
        A.append([a[k] * s for k, s in cols] + [Fraction(0)] * ns)
        b.append(off)
    cs = [c[k] * s for k, s in cols] + [Fraction(0)] * ns
    if not A:
        A = []
        res = lp.simplex_standard([[Fraction(0)] * width], [Fraction(0)], cs)
    else:
        res = lp.simplex_standard(A, b, cs)
    if res.status != lp.OPTIMAL:
        return res
    x = [Fraction(0)] * n
    for j, (k, s) in enumerate(cols):
        if res.point[j]:
            x[k] += s * res.point[j]
    value = dot(objective, x)
    return lp.LPResult(lp.OPTIMAL, value, tuple(x))


def _in_hull_lp(points: Sequence[Vector], p: Vector) -> bool:
    if not points:
        return False
    d = len(p)
    A = [[q[i] for q in points] for i in range(d)]
    A.append([Fraction(1)] * len(points))
    b = list(p) + [Fraction(1)]
    return lp.simplex_standard(A, b).status == lp.OPTIMAL


# ---------------------------------------------------------------------------
# hulls and vertices


def _dedupe(points):
    seen = {}
    for p in points:
        seen.setdefault(p, None)
    return list(seen)


def convex_hull(points: Iterable[Sequence]) -> Polytope:
    """Vertex representation of the convex hull of ``points``."""
    pts = _dedupe(vec(p) for p in points)
    if not pts:
        raise ValueError("convex hull of an empty point set")
    dim = len(pts[0])
    if any(len(p) != dim for p in pts):
        raise DimensionError("points of differing dimension")
    if len(pts) <= 2:
        return Polytope(dim, tuple(pts))

    # unique maximisers of linear functionals are certainly extreme
    sure = set()
    rng = random.Random(len(pts) * 7919 + dim)
    dirs = []
    for k in range(dim):
        e = [0] * dim
        e[k] = 1
        dirs.append(e)
        dirs.append([-v for v in e])
    for _ in range(4 * dim):
        dirs.append([rng.randint(-50, 50) for _ in range(dim)])
    for d in dirs:
        vals = [dot(d, p) for p in pts]
        top = max(vals)
        idx = [i for i, v in enumerate(vals) if v == top]
        if len(idx) == 1:
            sure.add(idx[0])

    keep = list(range(len(pts)))
    for i in range(len(pts)):
        if i in sure:
            continue
        others = [pts[j] for j in keep if j != i]
        if _in_hull_lp(others, pts[i]):
            keep.remove(i)
    return Polytope(dim, tuple(pts[i] for i in keep))


def enumerate_vertices(system: HalfspaceSystem, max_dim: int = MAX_ENUM_DIM) -> Polytope:
    """All vertices of a bounded polyhedron given by halfspaces.

    Raises :class:`UnboundedError` for unbounded regions; returns a polytope
    with an empty vertex tuple when the region is empty.
    """
    dim = system.dim
    if dim > max_dim:
        raise DimensionError(f"vertex enumeration limited to dim <= {max_dim}, got {dim}")
    aff = solve_affine([a for a, _ in system.equalities],
                       [b for _, b in system.equalities], dim)
    if aff is None:
        return Polytope(dim, (), system)
    x0, N = aff
    k = len(N)

    def lift(z):
        return tuple(x0[i] + sum((N[j][i] * z[j] for j in range(k) if z[j]), Fraction(0))
                     for i in range(dim))

    if k == 0:
        pt = tuple(x0)
        ok = all(dot(a, pt) <= b for a, b in system.rows)
        return Polytope(dim, (pt,) if ok else (), system)

    hrows = []
    for a, b in system.rows:
        az = [dot(a, N[j]) for j in range(k)]
        rhs = b - dot(a, x0)
        if all(v == 0 for v in az):
            if rhs < 0:
                return Polytope(dim, (), system)
            continue
        hrows.append(integerize(az + [-rhs]))
    hrows.append([0] * k + [-1])
    rays = cone_extreme_rays(hrows)
    if rays is None:
        feas = solve_lp([0] * dim, system)
        if feas.status == lp.OPTIMAL:
            raise UnboundedError("region is unbounded")
        return Polytope(dim, (), system)
    verts = []
    recession = False
    for r in rays:
        s = r[-1]
        if s > 0:
            verts.append(lift([Fraction(v, s) for v in r[:-1]]))
        elif any(r[:-1]):
            recession = True
    if recession and verts:
        raise UnboundedError("region is unbounded")
    verts = _dedupe(verts)
    verts.sort()
    return Polytope(dim, tuple(verts), system)


def contains_point(P: Polytope, p: Sequence) -> bool:
    p = vec(p)
    if len(p) != P.dim:
        raise DimensionError("point and polytope dimensions differ")
    if P.halfspaces is not None:
        return P.halfspaces.satisfied_by(p)
    return p in set(P.vertices) or _in_hull_lp(P.vertices, p)


def contains_polytope(P: Polytope, Q: Polytope) -> bool:
    """True iff ``Q`` is a subset of ``P``."""
    Q = Q.with_vertices()
    return all(contains_point(P, v) for v in Q.vertices)


def polytopes_equal(P: Polytope, Q: Polytope) -> bool:
    if P.dim != Q.dim:
        return False
    P, Q = P.with_vertices(), Q.with_vertices()
    return contains_polytope(P, Q) and contains_polytope(Q, P)


def maximize_with_tiebreak(P: Polytope, primary: Sequence, secondary: Sequence | None = None):
    """Lexicographic maximum of (primary, secondary) over the vertices of ``P``."""
    P = P.with_vertices()
    if not P.vertices:
        raise EmptyPolytopeError("cannot optimise over an empty polytope")
    if len(primary) != P.dim or (secondary is not None and len(secondary) != P.dim):
        raise DimensionError("objective dimension mismatch")
    if secondary is None:
        secondary = [0] * P.dim
    best = None
    for v in P.vertices:
        key = (dot(primary, v), dot(secondary, v))
        if best is None or key > best[0]:
            best = (key, v)
    (vp, vs), point = best
    return vp, vs, point


# ---------------------------------------------------------------------------
# float diagnostics


def point_distance(p, vertices, tol: float = 1e-12) -> float:
    """Euclidean distance from ``p`` to ``conv(vertices)``."""
    from .distance import min_norm_point
    import numpy as np

    V = np.asarray([[float(x) for x in v] for v in vertices], dtype=float)
    q = np.asarray([float(x) for x in p], dtype=float)
    _, dist = min_norm_point(V - q, tol=tol)
    return dist


def hausdorff_distance(P: Polytope, Q: Polytope, tol: float = 1e-12) -> float:
    """Hausdorff distance between two polytopes given by vertices (float)."""
    if P.vertices is None or Q.vertices is None:
        raise ValueError("Hausdorff distance needs vertex representations")
    if P.dim != Q.dim:
        raise DimensionError("dimension mismatch")
    a = max((point_distance(v, Q.vertices, tol) for v in P.vertices), default=0.0)
    b = max((point_distance(v, P.vertices, tol) for v in Q.vertices), default=0.0)
    return max(a, b)

"""Named menus as exact polytopes of CSPs, their value faces, and menu surgery."""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from fractions import Fraction
from functools import partial
from typing import Iterable, NamedTuple, Sequence

from .core import lp
from .core.geometry import (
    MAX_ENUM_DIM, DimensionError, HalfspaceSystem, Polytope, contains_point, convex_hull,
    dot, enumerate_vertices, polytopes_equal, vec,
)
from .game import Game, best_responses, check_csp, game_from_dict, game_to_dict, learner_utility
from .parallel import pmap
from .rational import format_vector, parse_vector


class MenuError(ValueError):
    pass


@dataclass(frozen=True)
class Menu:
    polytope: Polytope
    game: Game
    label: str = ""

    def __post_init__(self):
        if self.polytope.dim != self.game.dim:
            raise DimensionError("menu dimension must be m*n")

    @property
    def vertices(self) -> tuple:
        return self.polytope.with_vertices().vertices

    def __contains__(self, phi) -> bool:
        return contains_point(self.polytope, phi)


def _check_dim(game: Game):
    if game.dim > MAX_ENUM_DIM:
        raise DimensionError(f"m*n = {game.dim} exceeds the enumeration limit {MAX_ENUM_DIM}")


def simplex_rows(dim: int) -> list:
    rows = []
    for k in range(dim):
        a = [0] * dim
        a[k] = -1
        rows.append((a, 0))
    return rows


def nr_system(game: Game) -> HalfspaceSystem:
    m, n = game.m, game.n
    rows = simplex_rows(game.dim)
    for js in range(n):
        a = [game.uL[i][js] - game.uL[i][j] for i in range(m) for j in range(n)]
        if any(a):
            rows.append((a, 0))
    return HalfspaceSystem(game.dim, rows, [([1] * game.dim, 1)])


def nsr_system(game: Game) -> HalfspaceSystem:
    m, n = game.m, game.n
    rows = simplex_rows(game.dim)
    for j in range(n):
        for js in range(n):
            if js == j:
                continue
            a = [Fraction(0)] * game.dim
            for i in range(m):
                a[i * n + j] = game.uL[i][js] - game.uL[i][j]
            if any(a):
                rows.append((a, 0))
    return HalfspaceSystem(game.dim, rows, [([1] * game.dim, 1)])


def build_nr_menu(game: Game) -> Menu:
    _check_dim(game)
    return Menu(enumerate_vertices(nr_system(game)), game, "NR")


def build_nsr_menu(game: Game) -> Menu:
    _check_dim(game)
    return Menu(enumerate_vertices(nsr_system(game)), game, "NSR")


def fixed_action_menu(game: Game, j: int) -> Menu:
    if not 0 <= j < game.n:
        raise MenuError(f"learner action {j} out of range")
    return Menu(convex_hull(game.pure(i, j) for i in range(game.m)), game, f"fixed:{j}")


def menu_from_points(game: Game, points: Iterable[Sequence], label: str = "") -> Menu:
    pts = [check_csp(game, p) for p in points]
    return Menu(convex_hull(pts), game, label)


class ValueFaces(NamedTuple):
    Uplus: Fraction
    Uminus: Fraction
    Mplus: Polytope
    Mminus: Polytope


def value_faces(menu: Menu) -> ValueFaces:
    V = menu.vertices
    if not V:
        raise MenuError("empty menu")
    u = menu.game.uL_flat
    vals = [dot(u, v) for v in V]
    hi, lo = max(vals), min(vals)
    dim = menu.game.dim
    top = Polytope(dim, tuple(v for v, w in zip(V, vals) if w == hi))
    bot = Polytope(dim, tuple(v for v, w in zip(V, vals) if w == lo))
    return ValueFaces(hi, lo, top, bot)


# ---------------------------------------------------------------------------
# validity on a grid


def simplex_grid(m: int, d: int):
    """All points of the simplex in ``R^m`` with coordinates in ``(1/d) Z``."""
    for bars in itertools.combinations(range(d + m - 1), m - 1):
        parts = []
        prev = -1
        for b in bars + (d + m - 1,):
            parts.append(Fraction(b - prev - 1, d))
            prev = b
        yield tuple(parts)


def responds(vertices: Sequence, n: int, x: Sequence) -> bool:
    """Is there ``y`` in the simplex with ``x (x) y`` in ``conv(vertices)``?"""
    return response_mix(vertices, n, x) is not None


def response_mix(vertices: Sequence, n: int, x: Sequence) -> tuple | None:
    """Some ``y`` with ``x (x) y`` in ``conv(vertices)``, or ``None``."""
    m = len(x)
    k = len(vertices)
    # columns: lambda_1..lambda_k, y_1..y_n
    A, b = [], []
    for i in range(m):
        for j in range(n):
            row = [v[i * n + j] for v in vertices] + [Fraction(0)] * n
            row[k + j] = -Fraction(x[i])
            A.append(row)
            b.append(Fraction(0))
    A.append([Fraction(1)] * k + [Fraction(0)] * n)
    b.append(Fraction(1))
    A.append([Fraction(0)] * k + [Fraction(1)] * n)
    b.append(Fraction(1))
    res = lp.simplex_standard(A, b)
    if res.status != lp.OPTIMAL:
        return None
    return tuple(res.point[k:k + n])


class CheckReport(NamedTuple):
    passed: bool
    checked: int
    failing_x: tuple | None


def is_valid_menu(menu: Menu, grid_denominator: int, jobs: int | None = None) -> CheckReport:
    """Search the grid of optimizer mixes for one the menu cannot respond to.

    A failure certifies invalidity; a pass only means no counterexample at
    this resolution.
    """
    if grid_denominator < 1:
        raise MenuError("grid denominator must be positive")
    game = menu.game
    xs = list(simplex_grid(game.m, grid_denominator))
    ok = pmap(partial(responds, menu.vertices, game.n), xs, jobs)
    for x, good in zip(xs, ok):
        if not good:
            return CheckReport(False, len(xs), x)
    return CheckReport(True, len(xs), None)


# ---------------------------------------------------------------------------
# surgery


def extend_menu(menu: Menu, extra: Iterable[Sequence], label: str | None = None) -> Menu:
    pts = [check_csp(menu.game, p) for p in extra]
    hull = convex_hull(list(menu.vertices) + pts)
    return Menu(hull, menu.game, label if label is not None else menu.label + "+")


def drop_min_vertex(menu: Menu, nsr: Menu, phi0: Sequence) -> Menu:
    """Hull of ``nsr`` and all vertices of ``menu`` except ``phi0``."""
    phi0 = vec(phi0)
    if phi0 not in set(menu.vertices):
        raise MenuError("phi0 is not a vertex of the menu")
    faces = value_faces(menu)
    if phi0 not in set(faces.Mminus.vertices):
        raise MenuError("phi0 is not in the minimum-value face of the menu")
    if contains_point(value_faces(nsr).Mminus, phi0):
        raise MenuError("phi0 lies in the minimum-value face of the no-swap-regret menu")
    pts = list(nsr.vertices) + [v for v in menu.vertices if v != phi0]
    out = Menu(convex_hull(pts), menu.game, f"{menu.label}-drop")
    if polytopes_equal(out.polytope, menu.polytope):
        raise MenuError("removing phi0 left the menu unchanged")
    return out


# ---------------------------------------------------------------------------
# finite-time menus of learners that ignore the optimizer's play


def oblivious_menu(game: Game, learner_mixes: Sequence[Sequence]) -> Menu:
    """Exact finite-horizon menu of a learner whose round-``t`` mix is fixed in advance.

    The menu is the Minkowski average of ``conv{i (x) y_t}``; rounds with equal
    ``y_t`` collapse into one scaled summand.
    """
    T = len(learner_mixes)
    if T == 0:
        raise MenuError("need at least one round")
    counts: dict[tuple, int] = {}
    for y in learner_mixes:
        y = tuple(Fraction(v) for v in y)
        counts[y] = counts.get(y, 0) + 1
    groups = list(counts.items())
    m, n = game.m, game.n
    pts = []
    for choice in itertools.product(range(m), repeat=len(groups)):
        phi = [Fraction(0)] * game.dim
        for i, (y, k) in zip(choice, groups):
            w = Fraction(k, T)
            for j in range(n):
                phi[i * n + j] += w * y[j]
        pts.append(tuple(phi))
    return Menu(convex_hull(pts), game, "oblivious")


# ---------------------------------------------------------------------------
# oracles


def nsr_grid_points(game: Game, d: int) -> list:
    """``x (x) j`` for every grid mix ``x`` and pure best response ``j``."""
    pts = set()
    for x in simplex_grid(game.m, d):
        for j in best_responses(game, x):
            y = [0] * game.n
            y[j] = 1
            pts.add(tuple(Fraction(a) * b for a in x for b in y))
    return sorted(pts)


def decompose_product(game: Game, phi: Sequence):
    """Split a CSP supported on one learner column into ``(x, j)``, else ``None``."""
    n = game.n
    cols = {k % n for k, v in enumerate(phi) if v}
    if len(cols) != 1:
        return None
    j = cols.pop()
    x = tuple(phi[i * n + j] for i in range(game.m))
    return x, j


def is_best_response_product(game: Game, phi: Sequence) -> bool:
    d = decompose_product(game, phi)
    return d is not None and d[1] in best_responses(game, d[0])


def learner_values(menu: Menu) -> list:
    return [learner_utility(menu.game, v) for v in menu.vertices]


# ---------------------------------------------------------------------------
# JSON


def menu_to_dict(menu: Menu, with_halfspaces: bool = False, with_game: bool = True) -> dict:
    g = menu.game
    d = {
        "dim": g.dim,
        "m": g.m,
        "n": g.n,
        "vertices": [format_vector(v) for v in menu.vertices],
        "label": menu.label,
    }
    if with_game:
        d["game"] = game_to_dict(g)
    hs = menu.polytope.halfspaces
    if with_halfspaces and hs is not None:
        d["halfspaces"] = {
            "rows": [[format_vector(a), format_vector([b])[0]] for a, b in hs.rows],
            "equalities": [[format_vector(a), format_vector([b])[0]] for a, b in hs.equalities],
        }
    return d


def menu_from_dict(d: dict, game: Game | None = None) -> Menu:
    if game is None:
        if "game" not in d:
            raise MenuError("menu JSON carries no game; pass one explicitly")
        game = game_from_dict(d["game"])
    if int(d["m"]) != game.m or int(d["n"]) != game.n or int(d["dim"]) != game.dim:
        raise MenuError("menu shape does not match the game")
    verts = [parse_vector(v) for v in d["vertices"]]
    for v in verts:
        check_csp(game, v)
    return Menu(Polytope(game.dim, tuple(verts)), game, d.get("label", ""))


def dumps_menu(menu: Menu, **kw) -> str:
    return json.dumps(menu_to_dict(menu, **kw), indent=2)


def loads_menu(text: str, game: Game | None = None) -> Menu:
    return menu_from_dict(json.loads(text), game)

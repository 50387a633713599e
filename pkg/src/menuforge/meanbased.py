"""Continuous-time trajectories against mean-based learners and the menu M_MB.

A trajectory is a list of segments ``(x, t, b)``: the optimizer plays mix
``x`` for duration ``t`` while the learner plays pure action ``b``. States are
cumulative optimizer play ``X``; the learner's best-response cone ``R_b`` is
the set of states where ``b`` is a best response to ``X / |X|_1``.
"""
from __future__ import annotations

import itertools
import json
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple, Sequence

from .core.geometry import (
    HalfspaceSystem, Polytope, convex_hull, dot, enumerate_vertices,
)
from .game import (
    Game, GameError, best_responses, check_distribution, incentivizing_mix, learner_utility,
    marginals,
)
from .menus import Menu
from .parallel import pmap
from .rational import format_rational, format_vector, parse_rational, parse_vector

PLAIN = "plain"
SPIRAL = "spiral"


class TrajectoryError(ValueError):
    pass


class ShapeError(ValueError):
    """The operation only supports 2x3 games with three ordered best-response cones."""


@dataclass(frozen=True)
class Segment:
    x: tuple
    t: Fraction
    b: int

    def __post_init__(self):
        object.__setattr__(self, "x", tuple(Fraction(v) for v in self.x))
        object.__setattr__(self, "t", Fraction(self.t))
        if self.t <= 0:
            raise TrajectoryError("segment duration must be positive")
        if any(v < 0 for v in self.x) or sum(self.x) != 1:
            raise TrajectoryError("segment mix is not a distribution")


@dataclass(frozen=True)
class Trajectory:
    segments: tuple
    kind: str = PLAIN
    X0: tuple | None = None

    def __post_init__(self):
        segs = tuple(self.segments)
        if not segs:
            raise TrajectoryError("trajectory needs at least one segment")
        object.__setattr__(self, "segments", segs)
        if self.kind == PLAIN:
            if self.X0 is not None:
                raise TrajectoryError("plain trajectories carry no X0")
        elif self.kind == SPIRAL:
            if self.X0 is None:
                raise TrajectoryError("spiral needs X0")
            X0 = tuple(Fraction(v) for v in self.X0)
            if any(v < 0 for v in X0) or not any(X0):
                raise TrajectoryError("X0 must be nonnegative and nonzero")
            object.__setattr__(self, "X0", X0)
        else:
            raise TrajectoryError(f"unknown trajectory kind {self.kind!r}")
        m = len(segs[0].x)
        if any(len(s.x) != m for s in segs) or (self.X0 is not None and len(self.X0) != m):
            raise TrajectoryError("inconsistent optimizer dimension")

    @property
    def m(self) -> int:
        return len(self.segments[0].x)

    @property
    def duration(self) -> Fraction:
        return sum((s.t for s in self.segments), Fraction(0))

    def states(self) -> list:
        """Breakpoints ``X_0, ..., X_k``."""
        X = list(self.X0) if self.X0 is not None else [Fraction(0)] * self.m
        out = [tuple(X)]
        for s in self.segments:
            X = [a + s.t * b for a, b in zip(X, s.x)]
            out.append(tuple(X))
        return out

    def scaled(self, c) -> "Trajectory":
        c = Fraction(c)
        segs = tuple(Segment(s.x, s.t * c, s.b) for s in self.segments)
        X0 = None if self.X0 is None else tuple(v * c for v in self.X0)
        return Trajectory(segs, self.kind, X0)

    def normalized(self) -> "Trajectory":
        return self.scaled(1 / self.duration)


def _normalize(X):
    s = sum(X)
    return tuple(v / s for v in X)


class Violation(NamedTuple):
    segment: int
    where: str
    best: frozenset


def validate_trajectory(game: Game, tau: Trajectory) -> tuple[bool, Violation | None]:
    """Check ``b_i`` is a best response at both ends of every segment."""
    if tau.m != game.m:
        raise TrajectoryError("trajectory and game disagree on m")
    states = tau.states()
    for i, seg in enumerate(tau.segments):
        if not 0 <= seg.b < game.n:
            raise TrajectoryError(f"learner action {seg.b} out of range")
        start = states[i]
        if any(start):
            br = best_responses(game, _normalize(start))
            if seg.b not in br:
                return False, Violation(i, "start", br)
        br = best_responses(game, _normalize(states[i + 1]))
        if seg.b not in br:
            return False, Violation(i, "end", br)
    return True, None


def profile(tau: Trajectory, n: int | None = None) -> tuple:
    """``sum t_i (x_i (x) b_i) / sum t_i``."""
    if n is None:
        n = max(s.b for s in tau.segments) + 1
    m = tau.m
    phi = [Fraction(0)] * (m * n)
    total = tau.duration
    for s in tau.segments:
        for i in range(m):
            if s.x[i]:
                phi[i * n + s.b] += s.t * s.x[i]
    return tuple(v / total for v in phi)


def game_profile(game: Game, tau: Trajectory) -> tuple:
    return profile(tau, game.n)


def zero_regret_check(game: Game, tau: Trajectory) -> bool:
    """``u_L(Prof) == max_j u_L(xbar, j)`` exactly, ``xbar`` the optimizer marginal."""
    phi = game_profile(game, tau)
    x, _ = marginals(game, phi)
    return learner_utility(game, phi) == max(game.payoff_vector(x))


# ---------------------------------------------------------------------------
# best-response geometry of 2x3 games


@dataclass(frozen=True)
class BoundaryRay:
    actions: tuple
    direction: tuple
    id: str


def br_interval(game: Game, b: int):
    """Range of ``P(first optimizer action)`` on which ``b`` is a best response (m = 2)."""
    lo, hi = Fraction(0), Fraction(1)
    for k in range(game.n):
        if k == b:
            continue
        d0 = game.uL[0][b] - game.uL[0][k]
        d1 = game.uL[1][b] - game.uL[1][k]
        # d0 p + d1 (1 - p) >= 0
        a = d0 - d1
        if a > 0:
            lo = max(lo, -d1 / a)
        elif a < 0:
            hi = min(hi, -d1 / a)
        elif d1 < 0:
            return None
    if lo > hi:
        return None
    return lo, hi


def _require_shape(game: Game):
    if game.m != 2 or game.n != 3:
        raise ShapeError(f"mean-based menu needs a 2x3 game, got {game.m}x{game.n}")


def boundary_rays(game: Game) -> list[BoundaryRay]:
    _require_shape(game)
    ivs = {}
    for b in range(game.n):
        iv = br_interval(game, b)
        if iv is None or iv[0] == iv[1]:
            raise ShapeError(f"best-response region of action {b} has empty interior")
        ivs[b] = iv
    order = sorted(ivs, key=lambda b: ivs[b])
    rays = []
    for a, b in zip(order, order[1:]):
        if ivs[a][1] != ivs[b][0]:
            raise ShapeError("best-response regions are not contiguous")
        p = ivs[a][1]
        pair = tuple(sorted((a, b)))
        name = game.learner_labels[pair[0]] + game.learner_labels[pair[1]]
        rays.append(BoundaryRay(pair, (p, 1 - p), name))
    return rays


def cone_rows(game: Game, b: int) -> list:
    """Rows ``a`` with ``a . X <= 0`` iff ``b`` is a best response at state ``X``."""
    out = []
    for k in range(game.n):
        if k != b:
            a = [game.uL[i][k] - game.uL[i][b] for i in range(game.m)]
            if any(a):
                out.append(a)
    return out


# ---------------------------------------------------------------------------
# fingerprints


@dataclass(frozen=True)
class Fingerprint:
    actions: tuple
    kind: str = PLAIN
    spiral_ray: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "actions", tuple(self.actions))
        if not 1 <= len(self.actions) <= 3:
            raise TrajectoryError("fingerprints have one to three actions")
        if any(a == b for a, b in zip(self.actions, self.actions[1:])):
            raise TrajectoryError("fingerprint repeats an action consecutively")
        if (self.kind == SPIRAL) != (self.spiral_ray is not None):
            raise TrajectoryError("spiral fingerprints need a ray, plain ones none")

    def label(self, game: Game | None = None) -> str:
        names = [game.learner_labels[a] if game else str(a) for a in self.actions]
        s = "".join(names)
        return s if self.kind == PLAIN else f"{s}@{self.spiral_ray}"


def enumerate_fingerprints(game: Game) -> list[Fingerprint]:
    rays = boundary_rays(game)
    plain, spiral = [], []
    for k in (1, 2, 3):
        for seq in itertools.product(range(game.n), repeat=k):
            if any(a == b for a, b in zip(seq, seq[1:])):
                continue
            plain.append(Fingerprint(seq))
            for r in rays:
                if seq[0] in r.actions and seq[-1] in r.actions:
                    spiral.append(Fingerprint(seq, SPIRAL, r.id))
    return plain + spiral


def _ray(game: Game, ray_id: str) -> BoundaryRay:
    for r in boundary_rays(game):
        if r.id == ray_id:
            return r
    raise TrajectoryError(f"unknown boundary ray {ray_id!r}")


def fingerprint_system(game: Game, f: Fingerprint):
    """Halfspace system in ``y = (y_1, ..., y_k)`` space, and the spiral bounds on ``s``.

    For spirals ``X_0 = s r``; ``s`` is projected out and the returned list
    holds its constraints as ``(a, c)`` meaning ``a . y + c s <= 0``.
    """
    m = game.m
    k = len(f.actions)
    dim = m * k

    def partial_sum(upto):
        # coefficient vector of X_upto - X_0 in y-space
        a = [Fraction(0)] * dim
        for l in range(upto):
            for i in range(m):
                a[l * m + i] = Fraction(1)
        return a

    rows = []
    for l in range(dim):
        a = [0] * dim
        a[l] = -1
        rows.append((a, 0))
    eqs = [([1] * dim, 1)]
    s_rows = []
    r = None
    if f.kind == SPIRAL:
        ray = _ray(game, f.spiral_ray)
        if f.actions[0] not in ray.actions or f.actions[-1] not in ray.actions:
            return None, None
        r = ray.direction
        total = partial_sum(k)
        cross = [Fraction(0)] * dim
        for l in range(k):
            cross[l * m] = total[l * m] * r[1]
            cross[l * m + 1] = -total[l * m + 1] * r[0]
        eqs.append((cross, 0))
    for idx, b in enumerate(f.actions):
        for state in (idx, idx + 1):
            if state == 0 and r is None:
                continue
            P = partial_sum(state)
            for c in cone_rows(game, b):
                a = [Fraction(0)] * dim
                for l in range(state):
                    for i in range(m):
                        a[l * m + i] = c[i] * P[l * m + i]
                coef = dot(c, r) if r is not None else Fraction(0)
                if coef == 0:
                    if any(a):
                        rows.append((a, 0))
                else:
                    s_rows.append((a, coef))
    if r is not None:
        # Fourier-Motzkin on s >= 0: lower bounds (coef < 0) against upper bounds (coef > 0)
        lowers = [(a, c) for a, c in s_rows if c < 0] + [([Fraction(0)] * dim, Fraction(-1))]
        uppers = [(a, c) for a, c in s_rows if c > 0]
        for al, cl in lowers:
            for au, cu in uppers:
                # s >= al.y / -cl and s <= -au.y / cu
                row = [x / -cl + y / cu for x, y in zip(al, au)]
                if any(row):
                    rows.append((row, 0))
    return HalfspaceSystem(dim, rows, eqs), s_rows


def s_range(s_rows, y) -> tuple:
    """Feasible ``[lo, hi]`` for the spiral scale ``s`` given ``y`` (``hi`` may be None)."""
    lo, hi = Fraction(0), None
    for a, c in s_rows:
        v = dot(a, y)
        bound = -v / c
        if c > 0:
            hi = bound if hi is None else min(hi, bound)
        else:
            lo = max(lo, bound)
    return lo, hi


def profile_map(game: Game, f: Fingerprint, y: Sequence) -> tuple:
    m, n = game.m, game.n
    phi = [Fraction(0)] * game.dim
    for l, b in enumerate(f.actions):
        for i in range(m):
            phi[i * n + b] += y[l * m + i]
    return tuple(phi)


@dataclass(frozen=True)
class FingerprintResult:
    fingerprint: Fingerprint
    y_vertices: tuple
    polytope: Polytope | None
    s_rows: tuple = field(default=(), compare=False)


def solve_fingerprint(game: Game, f: Fingerprint) -> FingerprintResult:
    _require_shape(game)
    sys, s_rows = fingerprint_system(game, f)
    if sys is None:
        return FingerprintResult(f, (), None)
    P = enumerate_vertices(sys)
    if not P.vertices:
        return FingerprintResult(f, (), None)
    images = [profile_map(game, f, y) for y in P.vertices]
    return FingerprintResult(f, P.vertices, convex_hull(images), tuple(s_rows or ()))


def fingerprint_polytope(game: Game, f: Fingerprint) -> Polytope:
    """Hull of the profiles of all trajectories with fingerprint ``f`` (possibly empty)."""
    res = solve_fingerprint(game, f)
    return res.polytope if res.polytope is not None else Polytope(game.dim, ())


@dataclass(frozen=True)
class Witness:
    fingerprint: Fingerprint
    y: tuple
    s: Fraction

    def trajectory(self, game: Game) -> Trajectory:
        return witness_trajectory(game, self.fingerprint, self.y, self.s)


def witness_trajectory(game: Game, f: Fingerprint, y: Sequence, s=0) -> Trajectory:
    m = game.m
    segs = []
    for l, b in enumerate(f.actions):
        yl = y[l * m:(l + 1) * m]
        t = sum(yl, Fraction(0))
        if t > 0:
            segs.append(Segment(tuple(v / t for v in yl), t, b))
    s = Fraction(s)
    if f.kind == SPIRAL and s > 0:
        r = _ray(game, f.spiral_ray).direction
        return Trajectory(tuple(segs), SPIRAL, tuple(s * v for v in r))
    return Trajectory(tuple(segs))


def _pick_s(s_rows, y):
    lo, hi = s_range(s_rows, y)
    if hi is not None and hi < lo:
        raise ArithmeticError("empty spiral scale range")
    if lo > 0:
        return lo
    if hi is None:
        return Fraction(1)
    return hi / 2


class MBMenu(NamedTuple):
    menu: Menu
    witnesses: dict
    fingerprints: list


def build_mb(game: Game, jobs: int | None = None) -> MBMenu:
    fps = enumerate_fingerprints(game)
    results = pmap(_solve_for_map, [(game, f) for f in fps], jobs)
    pts = []
    cand = {}
    for res in results:
        if res.polytope is None:
            continue
        for y in res.y_vertices:
            phi = profile_map(game, res.fingerprint, y)
            pts.append(phi)
            if phi not in cand:
                s = _pick_s(res.s_rows, y) if res.fingerprint.kind == SPIRAL else Fraction(0)
                cand[phi] = Witness(res.fingerprint, y, s)
    hull = convex_hull(pts)
    witnesses = {v: cand[v] for v in hull.vertices}
    return MBMenu(Menu(hull, game, "MB"), witnesses, fps)


def _solve_for_map(args):
    return solve_fingerprint(*args)


def build_mb_menu(game: Game, jobs: int | None = None) -> Menu:
    return build_mb(game, jobs).menu


# ---------------------------------------------------------------------------
# specific trajectories


def tie_point(game: Game, a: int, b: int) -> Fraction:
    """``P(first optimizer action)`` at which learner actions ``a`` and ``b`` tie (m = 2)."""
    d0 = game.uL[0][a] - game.uL[0][b]
    d1 = game.uL[1][a] - game.uL[1][b]
    if d0 == d1:
        raise GameError("actions never tie")
    return -d1 / (d0 - d1)


def tau_star(game: Game) -> Trajectory:
    """``{(q N + (1-q) Y, t1, C), (N, t2, B)}`` with ``q`` the B/C tie and ``p`` the A/B tie.

    Durations satisfy ``t1 + t2 = 1`` and ``t1 q + t2 = p`` so the optimizer
    marginal of the profile is the minimax mix.
    """
    _require_shape(game)
    A, B, C = 0, 1, 2
    q = tie_point(game, B, C)
    p = tie_point(game, A, B)
    t2 = (p - q) / (1 - q)
    t1 = 1 - t2
    return Trajectory((Segment((q, 1 - q), t1, C), Segment((Fraction(1), Fraction(0)), t2, B)))


def random_trajectory(game: Game, rng: random.Random, max_segments: int = 4,
                      denominator: int = 12) -> Trajectory:
    """A random valid plain trajectory with rational data."""
    m = game.m
    k = rng.randint(1, max_segments)
    X = [Fraction(0)] * m
    segs = []
    attempts = 0
    while len(segs) < k and attempts < 200:
        attempts += 1
        if any(X):
            choices = sorted(best_responses(game, _normalize(X)))
        else:
            choices = list(range(game.n))
        b = rng.choice(choices)
        cuts = sorted(rng.randint(0, denominator) for _ in range(m - 1))
        parts = [b2 - a2 for a2, b2 in zip([0] + cuts, cuts + [denominator])]
        x = tuple(Fraction(v, denominator) for v in parts)
        tmax = None
        for c in cone_rows(game, b):
            cx = dot(c, x)
            if cx > 0:
                bound = -dot(c, X) / cx
                tmax = bound if tmax is None else min(tmax, bound)
        if tmax is None:
            t = Fraction(rng.randint(1, 4 * denominator), denominator)
        elif tmax <= 0:
            continue
        elif rng.random() < 0.4:
            t = tmax
        else:
            t = tmax * Fraction(rng.randint(1, 99), 100)
        segs.append(Segment(x, t, b))
        X = [a + t * v for a, v in zip(X, x)]
    if not segs:
        j = rng.randrange(game.n)
        x = _any_mix_for(game, j)
        segs.append(Segment(x, Fraction(1), j))
    return Trajectory(tuple(segs))


def _any_mix_for(game: Game, j: int) -> tuple:
    return tuple(incentivizing_mix(game, j))


# ---------------------------------------------------------------------------
# discretization


def perturbation_plan(game: Game, tau: Trajectory) -> list[tuple[int, tuple]]:
    """Integer weights ``delta_i`` and mixes ``y_i`` whose running averages strictly incentivize ``b_i``."""
    plan = []
    acc = [Fraction(0)] * game.m
    total = 0
    for seg in tau.segments:
        y = incentivizing_mix(game, seg.b)
        d = 1
        while True:
            avg = [(a + d * v) / (total + d) for a, v in zip(acc, y)]
            if best_responses(game, avg) == frozenset({seg.b}):
                break
            d += 1
            if d > 10 ** 6:
                raise GameError(f"cannot strictly incentivize action {seg.b}")
        plan.append((d, tuple(y)))
        acc = [a + d * v for a, v in zip(acc, y)]
        total += d
    return plan


def discretize_runs(game: Game, tau: Trajectory, T: int, eps=0) -> list[tuple[int, tuple]]:
    """Run-length schedule ``[(rounds, x), ...]`` of total length at most ``T``."""
    if tau.kind != PLAIN:
        raise TrajectoryError("only plain trajectories can be discretized")
    ok, bad = validate_trajectory(game, tau)
    if not ok:
        raise TrajectoryError(f"invalid trajectory at segment {bad.segment}")
    tau = tau.normalized()
    eps = Fraction(eps)
    runs = []
    P = 0
    plan = []
    if eps > 0:
        plan = perturbation_plan(game, tau)
        base = sum(d for d, _ in plan)
        scale = int(eps * T) // base
        plan = [(d * scale, y) for d, y in plan] if scale > 0 else []
        P = sum(d for d, _ in plan)
    rest = T - P
    for idx, seg in enumerate(tau.segments):
        if plan and plan[idx][0] > 0:
            runs.append(plan[idx])
        r = int(seg.t * rest)
        if r > 0:
            runs.append((r, seg.x))
    return runs


def discretize(game: Game, tau: Trajectory, T: int, eps=0) -> list[tuple]:
    out = []
    for count, x in discretize_runs(game, tau, T, eps):
        out.extend([x] * count)
    return out


def spiral_unroll(game: Game, psi: Trajectory, tail: Fraction = Fraction(1, 1000),
                  max_copies: int = 400) -> Trajectory:
    """Plain trajectory approximating a spiral: an opening segment then scaled copies."""
    if psi.kind != SPIRAL:
        return psi
    X0 = psi.X0
    x0 = _normalize(X0)
    b0 = min(best_responses(game, x0))
    lam = sum(psi.states()[-1]) / sum(X0)
    segs = [Segment(x0, sum(X0), b0)]
    scale = Fraction(1)
    for _ in range(max_copies):
        # the copy at ``scale`` runs from scale * X0 to scale * lam * X0
        for s in psi.segments:
            segs.append(Segment(s.x, s.t * scale, s.b))
        scale *= lam
        if 1 / scale <= tail:
            break
    return Trajectory(tuple(segs)).normalized()


# ---------------------------------------------------------------------------
# JSON


def trajectory_to_dict(tau: Trajectory) -> dict:
    d = {"kind": tau.kind}
    if tau.X0 is not None:
        d["X0"] = format_vector(tau.X0)
    d["segments"] = [{"x": format_vector(s.x), "t": format_rational(s.t), "b": s.b}
                     for s in tau.segments]
    return d


def trajectory_from_dict(d: dict) -> Trajectory:
    try:
        segs = tuple(Segment(parse_vector(s["x"]), parse_rational(s["t"]), int(s["b"]))
                     for s in d["segments"])
        X0 = parse_vector(d["X0"]) if "X0" in d else None
        return Trajectory(segs, d.get("kind", PLAIN), X0)
    except (KeyError, TypeError) as exc:
        raise TrajectoryError(f"malformed trajectory: {exc}") from exc


def dumps_trajectory(tau: Trajectory) -> str:
    return json.dumps(trajectory_to_dict(tau), indent=2)


def loads_trajectory(text: str) -> Trajectory:
    return trajectory_from_dict(json.loads(text))


def check_segment_mix(game: Game, x) -> tuple:
    return check_distribution(x, game.m)

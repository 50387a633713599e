"""Learner values against menus, Pareto-optimality verdicts, and dominance witnesses."""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .core.geometry import (
    HalfspaceSystem, contains_point, maximize_with_tiebreak, polytopes_equal,
    solve_lp,
)
from .core.lp import OPTIMAL
from .game import Game, regret, swap_regret
from .menus import Menu, build_nsr_menu, drop_min_vertex, extend_menu, menu_to_dict, value_faces
from .parallel import pmap
from .rational import format_rational, format_vector

MIN_FACE_MATCHES_NSR = "min_face_matches_nsr"
MIN_FACE_STRICTLY_LARGER = "min_face_strictly_larger"
NOT_NO_REGRET = "not_no_regret"
MISSING_PHI_PLUS = "missing_phi_plus"


class SearchFailure(RuntimeError):
    """The separating-direction sweep ran out of budget (inconclusive)."""


class PreconditionError(ValueError):
    pass


def learner_value(menu: Menu, uO: Sequence) -> Fraction:
    """Learner payoff at the optimizer's best CSP, ties broken for the learner."""
    _, v, _ = maximize_with_tiebreak(menu.polytope, uO, menu.game.uL_flat)
    return v


@dataclass(frozen=True)
class ParetoVerdict:
    optimal: bool
    reason: str
    witness_vertex: tuple | None = None
    dominating_menu: Menu | None = None
    detail: str = ""

    def __post_init__(self):
        if self.optimal != (self.reason == MIN_FACE_MATCHES_NSR):
            raise ValueError("optimal must hold exactly when the min faces match")

    def to_dict(self) -> dict:
        d = {"optimal": self.optimal, "reason": self.reason}
        if self.witness_vertex is not None:
            d["witness_vertex"] = format_vector(self.witness_vertex)
        if self.dominating_menu is not None:
            d["dominating_menu"] = menu_to_dict(self.dominating_menu, with_game=False)
        if self.detail:
            d["detail"] = self.detail
        return d


def check_pareto_optimal(menu: Menu, game: Game | None = None, nsr: Menu | None = None) -> ParetoVerdict:
    """Decide Pareto-optimality of a polytopal no-regret menu by comparing min-value faces.

    Menus outside the no-regret region, or not containing the no-swap-regret
    menu, are outside the scope of the characterization and get an abstaining
    ``not_no_regret`` verdict.
    """
    game = game or menu.game
    if nsr is None:
        nsr = build_nsr_menu(game)
    for v in menu.vertices:
        if regret(game, v) > 0:
            return ParetoVerdict(False, NOT_NO_REGRET, v, detail="vertex with positive regret")
    nsr_faces = value_faces(nsr)
    missing = [v for v in nsr_faces.Mplus.vertices if not contains_point(menu.polytope, v)]
    if missing:
        dom = extend_menu(menu, missing, label=f"{menu.label}+phi_plus")
        return ParetoVerdict(False, MISSING_PHI_PLUS, missing[0], dom)
    outside = [v for v in nsr.vertices if not contains_point(menu.polytope, v)]
    if outside:
        return ParetoVerdict(False, NOT_NO_REGRET, outside[0],
                             detail="menu does not contain the no-swap-regret menu")
    faces = value_faces(menu)
    if polytopes_equal(faces.Mminus, nsr_faces.Mminus):
        return ParetoVerdict(True, MIN_FACE_MATCHES_NSR)
    # most swap regret first, then lexicographically largest, so the choice is reproducible
    cands = [v for v in faces.Mminus.vertices if not contains_point(nsr_faces.Mminus, v)]
    phi0 = max(cands, key=lambda v: (swap_regret(game, v), v))
    dom = drop_min_vertex(menu, nsr, phi0)
    return ParetoVerdict(False, MIN_FACE_STRICTLY_LARGER, phi0, dom)


# ---------------------------------------------------------------------------
# separating optimizer payoffs


@dataclass(frozen=True)
class SeparationWitness:
    uO: tuple
    vL_winner: Fraction
    vL_loser: Fraction
    t: Fraction = Fraction(0)
    sign: int = 1

    def __post_init__(self):
        if not self.vL_winner > self.vL_loser:
            raise ValueError("witness must separate strictly")

    def to_dict(self) -> dict:
        return {
            "uO": format_vector(self.uO),
            "vL_winner": format_rational(self.vL_winner),
            "vL_loser": format_rational(self.vL_loser),
            "t": format_rational(self.t),
            "sign": self.sign,
        }


def separating_direction(point: Sequence, vertices: Sequence[Sequence]) -> tuple:
    """Box-bounded ``u`` maximizing ``min_v u.(point - v)``; the margin is positive iff separable."""
    dim = len(point)
    rows = []
    for k in range(dim):
        a = [0] * (dim + 1)
        a[k] = 1
        rows.append((a, 1))
        a = [0] * (dim + 1)
        a[k] = -1
        rows.append((a, 1))
    for v in vertices:
        # mu - u.(point - v) <= 0
        rows.append(([-(p - q) for p, q in zip(point, v)] + [1], 0))
    res = solve_lp([0] * dim + [1], HalfspaceSystem(dim + 1, rows), "max")
    assert res.status == OPTIMAL
    return res.point[:dim], res.value


def circle_point(t: Fraction) -> tuple[Fraction, Fraction]:
    """Rational point ``((1-t^2)/(1+t^2), 2t/(1+t^2))`` of the unit circle."""
    d = 1 + t * t
    return (1 - t * t) / d, 2 * t / d


def sweep_parameters(budget: int) -> list[Fraction]:
    """Breadth-first refinement of ``t`` in ``[0, inf)``: coarse anchors then bisections."""
    anchors = [Fraction(0), Fraction(1, 16), Fraction(1, 4), Fraction(1, 2), Fraction(1),
               Fraction(2), Fraction(4), Fraction(16), Fraction(64), Fraction(1024)]
    ts = list(anchors)
    seen = set(ts)
    layer = anchors
    while len(ts) < budget:
        nxt = [layer[0]]
        grew = False
        for a, b in zip(layer, layer[1:]):
            mid = (a + b) / 2
            if mid not in seen:
                seen.add(mid)
                ts.append(mid)
                grew = True
            nxt.extend([mid, b])
        if not grew:
            break
        layer = nxt
    return ts[:budget]


def find_separating_uO(winner: Menu, loser: Menu, game: Game | None = None,
                       sweep_budget: int = 400) -> SeparationWitness:
    """Search ``span(u_L, u0)`` for an optimizer payoff where ``winner`` is strictly better."""
    game = game or winner.game
    if polytopes_equal(winner.polytope, loser.polytope):
        raise PreconditionError("menus are identical")
    fw, fl = value_faces(winner), value_faces(loser)
    if not polytopes_equal(fw.Mplus, fl.Mplus):
        raise PreconditionError("menus have different maximum-value faces")
    out = [v for v in loser.vertices if not contains_point(winner.polytope, v)]
    if not out and not polytopes_equal(fw.Mminus, fl.Mminus):
        raise PreconditionError("loser is inside winner with a different min face")
    if out:
        u0, _ = separating_direction(out[0], winner.vertices)
    else:
        v = next(v for v in winner.vertices if not contains_point(loser.polytope, v))
        u0, _ = separating_direction(v, loser.vertices)
    uL = game.uL_flat
    for t in sweep_parameters(sweep_budget):
        c, s = circle_point(t)
        for sign in (1, -1):
            u = tuple(c * a + sign * s * b for a, b in zip(uL, u0))
            vw, vl = learner_value(winner, u), learner_value(loser, u)
            if vw > vl:
                return SeparationWitness(u, vw, vl, t, sign)
    raise SearchFailure("no separating optimizer payoff found within budget")


# ---------------------------------------------------------------------------
# sampling audit


@dataclass(frozen=True)
class AuditReport:
    wins: int
    ties: int
    losses: int
    first_loss: tuple | None = None

    def to_dict(self) -> dict:
        d = {"wins": self.wins, "ties": self.ties, "losses": self.losses}
        if self.first_loss is not None:
            d["first_loss"] = format_vector(self.first_loss)
        return d


def sample_uO(dim: int, count: int, seed: int, denominator: int = 100) -> list[tuple]:
    rng = random.Random(seed)
    return [tuple(Fraction(rng.randint(-denominator, denominator), denominator) for _ in range(dim))
            for _ in range(count)]


def _compare(args):
    cand, base, u = args
    a, b = learner_value(cand, u), learner_value(base, u)
    return (a > b) - (a < b)


def audit_dominance(candidate: Menu, baseline: Menu, uO_samples: Sequence[Sequence],
                    jobs: int | None = None) -> AuditReport:
    if candidate.game.dim != baseline.game.dim:
        raise ValueError("menus live in different dimensions")
    for u in uO_samples:
        if len(u) != candidate.game.dim:
            raise ValueError("sample dimension mismatch")
    cmp = pmap(_compare, [(candidate, baseline, tuple(u)) for u in uO_samples], jobs)
    first_loss = next((tuple(u) for u, c in zip(uO_samples, cmp) if c < 0), None)
    return AuditReport(cmp.count(1), cmp.count(0), cmp.count(-1), first_loss)


def value_gap(winner: Menu, loser: Menu, uO) -> Fraction:
    return learner_value(winner, uO) - learner_value(loser, uO)
